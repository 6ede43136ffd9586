#include <gtest/gtest.h>

#include <random>

#include "sympcap/williamson.hpp"

using namespace sympcap;

namespace {

QuadraticHamiltonian random_pd(int dof, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix b(2 * dof, 2 * dof);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) b(i, j) = g(rng);
    return QuadraticHamiltonian(b.transpose() * b + 0.1 * Matrix::Identity(2 * dof, 2 * dof));
}

double reconstruction_error(const QuadraticHamiltonian& h, const WilliamsonDecomposition& wd) {
    const Matrix& s = wd.S.matrix();
    return (s.transpose() * wd.diagonal() * s - h.matrix()).cwiseAbs().maxCoeff() / h.matrix().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Williamson, OscillatorFrequencies) {
    const auto wd = williamson(QuadraticHamiltonian::oscillator(2, 1.0, 2.0));
    EXPECT_NEAR(wd.omegas(0), 2.0, 1e-12);
    EXPECT_NEAR(wd.omegas(1), 2.0, 1e-12);
    EXPECT_LE(wd.residual, 1e-12);
}

TEST(Williamson, IdentityHasUnitSpectrum) {
    const auto wd = williamson(QuadraticHamiltonian(Matrix::Identity(6, 6)));
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(wd.omegas(j), 1.0, 1e-12);
    EXPECT_LE(wd.residual, 1e-12);
    // any S with S^T S = I and symplectic is admissible; identity is one of them
    EXPECT_LT((wd.S.matrix().transpose() * wd.S.matrix() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Williamson, TwoByTwoByHand) {
    // J M = [[0, 4], [-1, 0]] has eigenvalues +-2i
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 4.0;
    EXPECT_NEAR(williamson(QuadraticHamiltonian(m)).omegas(0), 2.0, 1e-13);
}

TEST(Williamson, RejectsIndefinite) {
    Matrix m = Matrix::Identity(4, 4);
    m(2, 2) = -1.0;
    EXPECT_THROW(williamson(QuadraticHamiltonian(m)), NotPositiveDefinite);
}

TEST(Williamson, SortedDescendingAndPositive) {
    const auto wd = williamson(QuadraticHamiltonian::normal_form(Vector::LinSpaced(4, 1.0, 4.0)));
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(wd.omegas(j), 4.0 - j, 1e-12);
}

TEST(Williamson, ReconstructsRandomPositiveDefinite) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int dof = 1 + trial % 5;
        const auto h = random_pd(dof, rng);
        const auto wd = williamson(h);
        EXPECT_LE(reconstruction_error(h, wd), 1e-8) << "trial " << trial;
        EXPECT_LE(symplectic_defect(wd.S.matrix()), 1e-9 * std::max(1.0, std::pow(wd.S.matrix().cwiseAbs().maxCoeff(), 2)));
        EXPECT_GT(wd.omegas.minCoeff(), 0.0);
    }
}

TEST(Williamson, DegenerateClusterFromConjugatedIsotropic) {
    // isotropic frequencies hidden by a random symplectic change of basis
    const auto s = random_symplectic(3, 0.4, 77);
    const auto h = QuadraticHamiltonian::oscillator(3, 1.0, 1.5).conjugated(s);
    const auto wd = williamson(h);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(wd.omegas(j), 1.5, 1e-9);
    EXPECT_LE(reconstruction_error(h, wd), 1e-8);
}

// omegas(S^T M S) == omegas(M)
TEST(Williamson, SpectrumInvariantUnderSymplecticConjugation) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int dof = 1 + trial % 4;
        const auto h = random_pd(dof, rng);
        const auto s = random_symplectic(dof, 0.4, 500 + trial);
        const Vector a = symplectic_spectrum(h), b = symplectic_spectrum(h.conjugated(s));
        EXPECT_LE(((a - b).array().abs() / a.array()).maxCoeff(), 1e-8) << "trial " << trial;
    }
}

// M2 - M1 PSD  =>  omegas(M2) >= omegas(M1) elementwise (sorted)
TEST(Williamson, MonotoneInTheMatrix) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 40; ++trial) {
        const int dof = 1 + trial % 4;
        const auto h1 = random_pd(dof, rng);
        Matrix c(2 * dof, 2 * dof);
        for (int i = 0; i < c.rows(); ++i)
            for (int j = 0; j < c.cols(); ++j) c(i, j) = g(rng);
        const QuadraticHamiltonian h2(h1.matrix() + 0.3 * c.transpose() * c);
        const Vector w1 = symplectic_spectrum(h1), w2 = symplectic_spectrum(h2);
        for (int j = 0; j < dof; ++j) EXPECT_GE(w2(j), w1(j) * (1.0 - 1e-12)) << "trial " << trial;
    }
}

TEST(Williamson, NormalModePointLiesOnShell) {
    std::mt19937_64 rng(8);
    const auto h = random_pd(3, rng);
    const auto wd = williamson(h);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(h.energy(wd.normal_mode_point(j, 1.7)), 1.7, 1e-10);
}
