#include <gtest/gtest.h>

#include "sympcap/symplectic.hpp"

using namespace sympcap;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST(StandardForm, SquaresToMinusIdentityAndIsSkew) {
    for (int n = 1; n <= 5; ++n) {
        const Matrix J = standard_form(n);
        EXPECT_EQ((J * J + Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ((J.transpose() + J).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(IsSymplectic, TrivialCases) {
    EXPECT_TRUE(is_symplectic(Matrix::Identity(4, 4), 1e-10));
    EXPECT_TRUE(is_symplectic(diag2(2.0, 0.5)));
    EXPECT_FALSE(is_symplectic(diag2(2.0, 2.0)));
}

TEST(IsSymplectic, OddDimensionIsRejected) {
    EXPECT_THROW(is_symplectic(Matrix::Identity(3, 3)), DimensionError);
    EXPECT_THROW(is_symplectic(Matrix::Identity(2, 4)), DimensionError);
}

TEST(PhaseVector, RequiresEvenLength) {
    EXPECT_THROW(PhaseVector(Vector::Zero(3)), DimensionError);
    EXPECT_THROW(PhaseVector(Vector::Zero(0)), DimensionError);
    const auto z = PhaseVector::from_qp(Vector::Constant(2, 1.0), Vector::Constant(2, 2.0));
    EXPECT_EQ(z.dof(), 2);
    EXPECT_EQ(z.p()(1), 2.0);
}

TEST(Compose, DiagonalProduct) {
    const auto a = SymplecticMatrix::certify(diag2(2.0, 0.5));
    const auto b = SymplecticMatrix::certify(diag2(3.0, 1.0 / 3.0));
    const auto c = compose(a, b);
    EXPECT_NEAR(c.matrix()(0, 0), 6.0, 1e-15);
    EXPECT_NEAR(c.matrix()(1, 1), 1.0 / 6.0, 1e-15);
}

TEST(Compose, WithInverseIsIdentity) {
    const auto s = random_symplectic(3, 0.7, 11);
    const auto id = compose(s, s.inverse());
    EXPECT_LT((id.matrix() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Compose, RandomPairStaysSymplectic) {
    const auto a = random_symplectic(2, 1.0, 3);
    const auto b = random_symplectic(2, 1.0, 4);
    const auto c = compose(a, b);
    // direct multiplication oracle
    const Matrix direct = a.matrix() * b.matrix();
    EXPECT_EQ((c.matrix() - direct).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(is_symplectic(direct, 1e-9));
}

TEST(Compose, DimensionMismatch) {
    EXPECT_THROW(compose(SymplecticMatrix::identity(1), SymplecticMatrix::identity(2)), DimensionError);
}

TEST(Certify, RejectsNonSymplectic) {
    EXPECT_THROW(SymplecticMatrix::certify(diag2(2.0, 2.0)), NotSymplectic);
}

TEST(RandomSymplectic, SmallSigmaApproachesIdentity) {
    const auto s = random_symplectic(2, 1e-9, 5);
    EXPECT_LT((s.matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(RandomSymplectic, DeterminantAndDefect) {
    EXPECT_NEAR(random_symplectic(1, 1.0, 42).matrix().determinant(), 1.0, 1e-9);
    EXPECT_LE(symplectic_defect(random_symplectic(3, 0.5, 7).matrix()), 1e-9);
}

TEST(RandomSymplectic, DeterministicForSeed) {
    EXPECT_EQ(random_symplectic(2, 1.0, 9).matrix(), random_symplectic(2, 1.0, 9).matrix());
    EXPECT_NE(random_symplectic(2, 1.0, 9).matrix(), random_symplectic(2, 1.0, 10).matrix());
}

TEST(RandomSymplectic, RejectsBadArguments) {
    EXPECT_THROW(random_symplectic(0, 1.0, 1), InvalidArgument);
    EXPECT_THROW(random_symplectic(2, 0.0, 1), InvalidArgument);
}

// Property: every generated or composed matrix has defect <= 1e-9.
TEST(RandomSymplectic, EnsembleDefectProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int n = 1 + static_cast<int>(seed % 4);
        const auto a = random_symplectic(n, 0.8, seed);
        const auto b = random_symplectic(n, 0.8, seed + 1000);
        EXPECT_LE(a.defect(), 1e-9);
        EXPECT_LE(symplectic_defect(compose(a, b).matrix()), 1e-9) << "seed " << seed;
    }
}

TEST(QuadraticHamiltonian, Validation) {
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1.0;
    EXPECT_THROW(QuadraticHamiltonian{asym}, InvalidArgument);
    EXPECT_THROW(QuadraticHamiltonian{Matrix::Identity(3, 3)}, DimensionError);
    const QuadraticHamiltonian indefinite(diag2(1.0, -1.0));
    EXPECT_FALSE(indefinite.is_positive_definite());
    EXPECT_THROW(indefinite.require_positive_definite(), NotPositiveDefinite);
}

TEST(QuadraticHamiltonian, OscillatorEnergy) {
    const auto h = QuadraticHamiltonian::oscillator(2, 2.0, 3.0);
    Vector z(4);
    z << 1.0, 0.0, 0.0, 2.0;
    // (|p|^2 + m^2 w^2 |q|^2) / 2m = (4 + 36) / 4
    EXPECT_DOUBLE_EQ(h.energy(z), 10.0);
}
