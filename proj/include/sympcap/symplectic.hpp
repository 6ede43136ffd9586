#pragma once

// Linear symplectic algebra on R^{2N} with coordinates ordered (q_1..q_N, p_1..p_N).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "sympcap/errors.hpp"

namespace sympcap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultSymplecticTol = 1e-10;
inline constexpr int kMaxDof = 32;

/// Point of phase space, (q, p) block ordering.
class PhaseVector {
public:
    explicit PhaseVector(Vector coords) : coords_(std::move(coords)) {
        if (coords_.size() < 2 || coords_.size() % 2 != 0)
            throw DimensionError("phase vector length must be even and >= 2, got " +
                                 std::to_string(coords_.size()));
    }

    static PhaseVector from_qp(const Vector& q, const Vector& p) {
        if (q.size() != p.size())
            throw DimensionError("q and p blocks differ in length");
        Vector z(q.size() + p.size());
        z << q, p;
        return PhaseVector(std::move(z));
    }

    int dof() const { return static_cast<int>(coords_.size() / 2); }
    const Vector& coords() const { return coords_; }
    auto q() const { return coords_.head(dof()); }
    auto p() const { return coords_.tail(dof()); }

private:
    Vector coords_;
};

/// J = [[0, I], [-I, 0]].
inline Matrix standard_form(int dof) {
    if (dof < 1) throw DimensionError("degrees of freedom must be >= 1");
    Matrix J = Matrix::Zero(2 * dof, 2 * dof);
    J.topRightCorner(dof, dof).setIdentity();
    J.bottomLeftCorner(dof, dof) = -Matrix::Identity(dof, dof);
    return J;
}

inline int dof_of(const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("matrix is not square (" + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ")");
    if (m.rows() == 0 || m.rows() % 2 != 0)
        throw DimensionError("matrix dimension must be even, got " + std::to_string(m.rows()));
    return static_cast<int>(m.rows() / 2);
}

/// max |S^T J S - J|
inline double symplectic_defect(const Matrix& s) {
    const Matrix J = standard_form(dof_of(s));
    return (s.transpose() * J * s - J).cwiseAbs().maxCoeff();
}

inline bool is_symplectic(const Matrix& s, double tol = kDefaultSymplecticTol) {
    return symplectic_defect(s) <= tol;
}

/** A 2N x 2N matrix certified to satisfy S^T J S = J to within `tol`.
    Construction through `certify` is the only way to obtain one. */
class SymplecticMatrix {
public:
    static SymplecticMatrix certify(Matrix s, double tol = kDefaultSymplecticTol) {
        const double defect = symplectic_defect(s);
        if (!(defect <= tol))
            throw NotSymplectic("symplectic defect " + std::to_string(defect) +
                                " exceeds tolerance " + std::to_string(tol));
        const double det = s.determinant();
        if (!(std::abs(det - 1.0) <= 1e-8))
            throw NotSymplectic("determinant " + std::to_string(det) + " differs from 1");
        return SymplecticMatrix(std::move(s), tol, defect);
    }

    static SymplecticMatrix identity(int dof) {
        return SymplecticMatrix(Matrix::Identity(2 * dof, 2 * dof), kDefaultSymplecticTol, 0.0);
    }

    const Matrix& matrix() const { return s_; }
    int dof() const { return static_cast<int>(s_.rows() / 2); }
    double tolerance() const { return tol_; }
    double defect() const { return defect_; }

    /// S^{-1} = -J S^T J, exact for symplectic S.
    SymplecticMatrix inverse() const {
        const Matrix J = standard_form(dof());
        Matrix inv = -J * s_.transpose() * J;
        return certify(std::move(inv), std::max(tol_, 1e-9));
    }

private:
    SymplecticMatrix(Matrix s, double tol, double defect)
        : s_(std::move(s)), tol_(tol), defect_(defect) {}

    Matrix s_;
    double tol_;
    double defect_;
};

/// Product a*b (apply b first).  The product is re-certified at `tol`.
inline SymplecticMatrix compose(const SymplecticMatrix& a, const SymplecticMatrix& b,
                                double tol = 1e-9) {
    if (a.dof() != b.dof())
        throw DimensionError("cannot compose symplectic matrices of dimension " +
                             std::to_string(2 * a.dof()) + " and " + std::to_string(2 * b.dof()));
    return SymplecticMatrix::certify(a.matrix() * b.matrix(), tol);
}

/** Random symplectic matrix S = exp(J A) where A is symmetric with
    independent N(0, sigma^2) entries on and above the diagonal. */
inline SymplecticMatrix random_symplectic(int dof, double sigma, std::uint64_t seed) {
    if (dof < 1 || dof > kMaxDof) throw InvalidArgument("dof must be in 1..32");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    const int n = 2 * dof;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = gauss(rng);
    Matrix ja = standard_form(dof) * a;
    return SymplecticMatrix::certify(ja.exp(), 1e-9);
}

/// H(z) = z^T M z / 2 with symmetric M.
class QuadraticHamiltonian {
public:
    explicit QuadraticHamiltonian(Matrix m) : m_(std::move(m)) {
        const int dof = dof_of(m_);
        if (dof > kMaxDof) throw DimensionError("at most 32 degrees of freedom are supported");
        const double scale = m_.cwiseAbs().maxCoeff();
        const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
        if (!std::isfinite(scale)) throw InvalidArgument("Hamiltonian matrix has non-finite entries");
        if (asym > 1e-12 * scale)
            throw InvalidArgument("Hamiltonian matrix is not symmetric (asymmetry " +
                                  std::to_string(asym) + ")");
        m_ = 0.5 * (m_ + m_.transpose());
    }

    /// H = (|p|^2 + m^2 w^2 |q|^2) / 2m for N identical oscillators.
    static QuadraticHamiltonian oscillator(int dof, double mass, double omega) {
        if (!(mass > 0.0) || !(omega > 0.0))
            throw InvalidArgument("mass and frequency must be positive");
        Matrix m = Matrix::Zero(2 * dof, 2 * dof);
        m.topLeftCorner(dof, dof).diagonal().setConstant(mass * omega * omega);
        m.bottomRightCorner(dof, dof).diagonal().setConstant(1.0 / mass);
        return QuadraticHamiltonian(std::move(m));
    }

    /// diag(w_1..w_N, w_1..w_N): already in normal form.
    static QuadraticHamiltonian normal_form(const Vector& omegas) {
        const auto dof = omegas.size();
        Matrix m = Matrix::Zero(2 * dof, 2 * dof);
        m.diagonal() << omegas, omegas;
        return QuadraticHamiltonian(std::move(m));
    }

    const Matrix& matrix() const { return m_; }
    int dof() const { return static_cast<int>(m_.rows() / 2); }
    double energy(const Vector& z) const { return 0.5 * z.dot(m_ * z); }

    bool is_positive_definite() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() > 0.0;
    }

    void require_positive_definite() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        if (!(lo > 0.0))
            throw NotPositiveDefinite("Hamiltonian matrix has smallest eigenvalue " +
                                      std::to_string(lo));
    }

    /// S^T M S, the Hamiltonian expressed in the coordinates z = S z'.
    QuadraticHamiltonian conjugated(const SymplecticMatrix& s) const {
        if (s.dof() != dof()) throw DimensionError("conjugation dimension mismatch");
        return QuadraticHamiltonian(s.matrix().transpose() * m_ * s.matrix());
    }

private:
    Matrix m_;
};

}  // namespace sympcap
