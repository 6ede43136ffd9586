#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sympcap/nonsqueezing.hpp"

using namespace sympcap;
using std::numbers::pi;

namespace {

SymplecticMatrix diag_scaling(double lambda) {
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << lambda, lambda, 1.0 / lambda, 1.0 / lambda;
    return SymplecticMatrix::certify(m);
}

}  // namespace

TEST(LinearShadow, IdentityEveryPlane) {
    const auto id = SymplecticMatrix::identity(3);
    auto planes = nonconjugate_planes(3);
    for (const auto& c : conjugate_planes(3)) planes.push_back(c);
    for (const auto& pl : planes) {
        const auto r = linear_shadow_area(id, 1.5, pl);
        EXPECT_NEAR(r.area, pi * 2.25, 1e-13) << pl.label();
        EXPECT_TRUE(r.satisfied);
        EXPECT_EQ(r.method, ShadowMethod::exact_ellipse);
    }
}

TEST(LinearShadow, PositionPlaneMayShrink) {
    const auto r = linear_shadow_area(diag_scaling(0.5), 1.0, PlaneSelector::positions(1, 2));
    EXPECT_NEAR(r.area, pi / 4.0, 1e-14);
    EXPECT_FALSE(r.satisfied);
}

TEST(LinearShadow, ConjugatePlaneKeepsArea) {
    const auto r = linear_shadow_area(diag_scaling(0.5), 1.0, PlaneSelector::conjugate(1));
    EXPECT_NEAR(r.area, pi, 1e-14);
    EXPECT_TRUE(r.satisfied);
}

TEST(LinearShadow, BlockDeterminantMatchesDirectProduct) {
    const auto s = random_symplectic(3, 0.7, 5);
    const Matrix a = s.matrix() * s.matrix().transpose();
    for (const auto& pl : nonconjugate_planes(3)) {
        const auto [i, j] = pl.coordinates(3);
        const double direct = a(i, i) * a(j, j) - a(i, j) * a(j, i);
        EXPECT_NEAR(plane_block_determinant(s.matrix(), pl), direct, 1e-10 * std::abs(direct));
    }
}

TEST(Planes, Enumeration) {
    EXPECT_TRUE(nonconjugate_planes(1).empty());
    EXPECT_EQ(nonconjugate_planes(2).size(), 4u);   // q1q2 p1p2 q1p2 q2p1
    EXPECT_EQ(nonconjugate_planes(3).size(), 12u);  // 2*3 + 6
    EXPECT_EQ(conjugate_planes(4).size(), 4u);
}

TEST(Ensemble, ConjugateBoundHoldsAndNonconjugateShrinks) {
    const auto s = nonsqueeze_ensemble(2, 1000, 1.0, 1);
    EXPECT_GE(s.min_conjugate.determinant, 1.0 - 1e-9);
    EXPECT_TRUE(s.conjugate_bound_holds);
    ASSERT_TRUE(s.min_nonconjugate.has_value());
    EXPECT_LT(s.min_nonconjugate->determinant, 1.0);
    EXPECT_LT(s.max_defect, 1e-8);
}

TEST(Ensemble, SingleDegreeDeterminantIsOne) {
    const auto s = nonsqueeze_ensemble(1, 10, 1.0, 9);
    EXPECT_NEAR(s.min_conjugate.determinant, 1.0, 1e-9);
    EXPECT_FALSE(s.min_nonconjugate.has_value());
}

TEST(Ensemble, ThreeDegreesManySeeds) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = nonsqueeze_ensemble(3, 200, 0.8, seed);
        EXPECT_TRUE(s.conjugate_bound_holds) << "seed " << seed;
    }
}

TEST(Ensemble, Deterministic) {
    const auto a = nonsqueeze_ensemble(2, 50, 1.0, 77);
    const auto b = nonsqueeze_ensemble(2, 50, 1.0, 77);
    EXPECT_EQ(a.min_conjugate.determinant, b.min_conjugate.determinant);
    EXPECT_EQ(a.min_conjugate.member, b.min_conjugate.member);
}

TEST(EvolveShadow, InitialSnapshotOneDegree) {
    const auto flow = separable_flow(quartic_potential(), 1, 1e-2);
    const auto r = evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 100000, 0.02, {0.0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0].area, pi, 0.05 * pi);
    EXPECT_TRUE(r[0].satisfied);
    EXPECT_EQ(r[0].method, ShadowMethod::grid_estimate);
}

TEST(EvolveShadow, InitialSnapshotEveryPlaneTwoDegrees) {
    const auto flow = separable_flow(harmonic_potential(1.0), 2, 1e-2);
    auto planes = nonconjugate_planes(2);
    planes.push_back(PlaneSelector::conjugate(1));
    planes.push_back(PlaneSelector::conjugate(2));
    for (const auto& pl : planes) {
        const auto r = evolve_ball_shadow(Ball::centered(2, 1.0), flow, pl, 100000, 0.02, {0.0});
        EXPECT_NEAR(r[0].area, pi, 0.05 * pi) << pl.label();
    }
}

TEST(EvolveShadow, HarmonicRotationKeepsDisk) {
    const auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-2);
    const auto r = evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 50000, 0.02,
                                      {0.0, 0.5, 1.0, 2.0, 3.0});
    for (const auto& s : r) {
        EXPECT_NEAR(s.area, pi, 0.05 * pi) << "t=" << s.time;
        EXPECT_TRUE(s.satisfied);
    }
}

TEST(EvolveShadow, HarmonicPointsFollowTheRotation) {
    // closed-form oracle: a unit-frequency oscillator rotates (q, p) by angle t
    const auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-3);
    std::vector<ProjectedCloud> clouds;
    EvolveOptions opts;
    opts.clouds = &clouds;
    evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 200, 0.05, {0.0, 1.0}, opts);
    ASSERT_EQ(clouds.size(), 2u);
    for (std::size_t i = 0; i < 200; ++i) {
        const double q0 = clouds[0].x[i], p0 = clouds[0].y[i];
        EXPECT_NEAR(clouds[1].x[i], q0 * std::cos(1.0) + p0 * std::sin(1.0), 1e-6);
        EXPECT_NEAR(clouds[1].y[i], -q0 * std::sin(1.0) + p0 * std::cos(1.0), 1e-6);
    }
}

TEST(EvolveShadow, QuarticOscillatorShadowNeverShrinks) {
    const auto flow = separable_flow(quartic_potential(), 1, 1e-3);
    const auto r = evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 100000, 0.02,
                                      {1.0, 2.0, 5.0});
    for (const auto& s : r) EXPECT_GE(s.area, 0.95 * pi) << "t=" << s.time;
}

TEST(EvolveShadow, GridEstimateConverges) {
    const auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-2);
    const Ball ball = Ball::centered(1, 1.0);
    const auto coarse = evolve_ball_shadow(ball, flow, PlaneSelector::conjugate(1), 50000, 0.04, {1.0});
    const auto fine = evolve_ball_shadow(ball, flow, PlaneSelector::conjugate(1), 100000, 0.02, {1.0});
    EXPECT_LT(std::abs(coarse[0].area - fine[0].area) / fine[0].area, 0.02);
}

TEST(EvolveShadow, DeterministicAcrossWorkerCounts) {
    const auto flow = separable_flow(quartic_potential(), 2, 1e-2);
    EvolveOptions one, three;
    one.threads = 1;
    three.threads = 3;
    const auto a = evolve_ball_shadow(Ball::centered(2, 1.0), flow, PlaneSelector::conjugate(2), 5000, 0.05,
                                      {0.5, 1.0}, one);
    const auto b = evolve_ball_shadow(Ball::centered(2, 1.0), flow, PlaneSelector::conjugate(2), 5000, 0.05,
                                      {0.5, 1.0}, three);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].area, b[k].area);
}

TEST(EvolveShadow, BlowUpReportsTime) {
    // an inverted sextic well sends samples to infinity within finite time
    const auto pot = polynomial_potential({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0}, 1.0, -1e6, 1e6);
    const auto flow = separable_flow(pot, 1, 1e-2);
    try {
        evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 1000, 0.05, {5.0});
        FAIL() << "expected FlowDiverged";
    } catch (const FlowDiverged& e) {
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LE(e.time(), 5.0);
    }
}

TEST(EvolveShadow, RejectsBadArguments) {
    const auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-2);
    const Ball ball = Ball::centered(1, 1.0);
    EXPECT_THROW(evolve_ball_shadow(ball, flow, PlaneSelector::conjugate(1), 100, 0.0, {1.0}), InvalidArgument);
    EXPECT_THROW(evolve_ball_shadow(ball, flow, PlaneSelector::conjugate(1), 100, 0.1, {1.005}), InvalidArgument);
    EXPECT_THROW(evolve_ball_shadow(ball, flow, PlaneSelector::conjugate(2), 100, 0.1, {1.0}), InvalidArgument);
    const auto flow2 = separable_flow(harmonic_potential(1.0), 2, 1e-2);
    EXPECT_THROW(evolve_ball_shadow(ball, flow2, PlaneSelector::conjugate(1), 100, 0.1, {1.0}), DimensionError);
}

TEST(EvolveShadow, InconsistentGradientIsCaught) {
    auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-2);
    flow.potential_gradient = [](std::span<const double> q, std::span<double> g) { g[0] = 2.0 * q[0]; };
    EXPECT_THROW(evolve_ball_shadow(Ball::centered(1, 1.0), flow, PlaneSelector::conjugate(1), 100, 0.1, {1.0}),
                 FlowError);
}
