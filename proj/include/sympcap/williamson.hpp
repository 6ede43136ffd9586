#pragma once

// Williamson normal form M = S^T D S, D = diag(w, w), of a positive definite
// quadratic Hamiltonian, computed from the eigenvectors of J M.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include "sympcap/symplectic.hpp"

namespace sympcap {

struct WilliamsonDecomposition {
    Vector omegas;       ///< symplectic eigenvalues, descending
    SymplecticMatrix S;  ///< S^T diag(omegas, omegas) S == M
    double residual;     ///< max-norm relative reconstruction error

    int dof() const { return static_cast<int>(omegas.size()); }

    Matrix diagonal() const {
        Matrix d = Matrix::Zero(2 * dof(), 2 * dof());
        d.diagonal() << omegas, omegas;
        return d;
    }

    /** Point of the energy shell H = energy on the normal-mode orbit of
        index `mode` (0-based, descending frequency order). */
    Vector normal_mode_point(int mode, double energy) const {
        Vector w = Vector::Zero(2 * dof());
        w(mode) = std::sqrt(2.0 * energy / omegas(mode));
        return S.inverse().matrix() * w;
    }
};

namespace detail {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

// (-i/2) u^H J v; positive definite on the +i*w eigenspaces of J M.
inline Complex symplectic_hermitian(const ComplexVector& u, const ComplexVector& v, int dof) {
    const Complex uJv = u.head(dof).dot(v.tail(dof)) - u.tail(dof).dot(v.head(dof));
    return Complex(0.0, -0.5) * uJv;
}

struct PositiveBranch {
    std::vector<double> omegas;
    std::vector<ComplexVector> vectors;
};

inline PositiveBranch positive_branch(const QuadraticHamiltonian& h, bool with_vectors) {
    h.require_positive_definite();
    const int dof = h.dof();
    const Matrix& m = h.matrix();
    Eigen::EigenSolver<Matrix> es(standard_form(dof) * m, with_vectors);
    if (es.info() != Eigen::Success) throw NumericalDegeneracy("eigendecomposition of J M failed");

    const double scale = m.cwiseAbs().maxCoeff();
    const auto& values = es.eigenvalues();
    std::vector<int> picked;
    for (int i = 0; i < values.size(); ++i) {
        if (std::abs(values(i).real()) > 1e-8 * scale)
            throw NumericalDegeneracy("eigenvalue of J M with real part " +
                                      std::to_string(values(i).real()));
        if (values(i).imag() > 0.0) picked.push_back(i);
    }
    if (static_cast<int>(picked.size()) != dof)
        throw NumericalDegeneracy("J M does not have N eigenvalues in the upper half plane");
    std::stable_sort(picked.begin(), picked.end(),
                     [&](int a, int b) { return values(a).imag() > values(b).imag(); });

    PositiveBranch out;
    for (int i : picked) {
        out.omegas.push_back(values(i).imag());
        if (with_vectors) out.vectors.push_back(es.eigenvectors().col(i));
    }
    return out;
}

}  // namespace detail

/// Symplectic eigenvalues of M (positive imaginary parts of the eigenvalues of J M), descending.
inline Vector symplectic_spectrum(const QuadraticHamiltonian& h) {
    auto branch = detail::positive_branch(h, false);
    return Eigen::Map<Vector>(branch.omegas.data(), static_cast<Eigen::Index>(branch.omegas.size()));
}

inline WilliamsonDecomposition williamson(const QuadraticHamiltonian& h) {
    const int dof = h.dof();
    auto branch = detail::positive_branch(h, true);
    auto& omegas = branch.omegas;
    auto& vecs = branch.vectors;

    // Near-degenerate frequencies form a cluster whose eigenvectors are
    // orthonormalized together and which share the cluster-mean frequency.
    std::size_t begin = 0;
    while (begin < omegas.size()) {
        std::size_t end = begin + 1;
        while (end < omegas.size() &&
               omegas[end - 1] - omegas[end] < 1e-10 * std::max(1.0, omegas[begin]))
            ++end;
        for (std::size_t k = begin; k < end; ++k) {
            for (std::size_t l = begin; l < k; ++l)
                vecs[k] -= vecs[l] * detail::symplectic_hermitian(vecs[l], vecs[k], dof);
            const double norm2 = detail::symplectic_hermitian(vecs[k], vecs[k], dof).real();
            if (!(norm2 > 0.0))
                throw NumericalDegeneracy("eigenvector of J M has non-positive symplectic norm");
            vecs[k] /= std::sqrt(norm2);
        }
        if (end - begin > 1) {
            const double mean = std::accumulate(omegas.begin() + begin, omegas.begin() + end, 0.0) /
                                static_cast<double>(end - begin);
            std::fill(omegas.begin() + begin, omegas.begin() + end, mean);
        }
        begin = end;
    }

    // v_j = t_j + i t_{N+j}; T maps normal coordinates to the original ones.
    Matrix t(2 * dof, 2 * dof);
    for (int j = 0; j < dof; ++j) {
        t.col(j) = vecs[j].real();
        t.col(dof + j) = vecs[j].imag();
    }
    const Matrix J = standard_form(dof);
    Matrix s = -J * t.transpose() * J;

    Vector w = Eigen::Map<Vector>(omegas.data(), dof);
    Matrix d = Matrix::Zero(2 * dof, 2 * dof);
    d.diagonal() << w, w;
    const Matrix& m = h.matrix();
    const double residual =
        (s.transpose() * d * s - m).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();
    if (!(residual <= 1e-8))
        throw NumericalDegeneracy("Williamson reconstruction residual " + std::to_string(residual));

    const double smax = s.cwiseAbs().maxCoeff();
    auto cert = SymplecticMatrix::certify(std::move(s), 1e-9 * std::max(1.0, smax * smax));
    return WilliamsonDecomposition{std::move(w), std::move(cert), residual};
}

}  // namespace sympcap
