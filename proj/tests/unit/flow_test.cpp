#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sympcap/flow.hpp"

using namespace sympcap;
using std::numbers::pi;

namespace {

FlowSpec free_particle(int dof, double dt) {
    FlowSpec f;
    f.dof = dof;
    f.kinetic = [](std::span<const double> p) {
        double s = 0.0;
        for (double x : p) s += 0.5 * x * x;
        return s;
    };
    f.kinetic_gradient = [](std::span<const double> p, std::span<double> g) {
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = p[i];
    };
    f.potential = [](std::span<const double>) { return 0.0; };
    f.potential_gradient = [](std::span<const double>, std::span<double> g) {
        for (double& x : g) x = 0.0;
    };
    f.dt = dt;
    return f;
}

}  // namespace

TEST(Verlet, FreeParticleDriftsExactly) {
    const auto flow = free_particle(2, 0.25);
    Vector z(4);
    z << 1.0, -2.0, 0.5, 3.0;
    const auto out = verlet_step(PhaseVector(z), flow);
    EXPECT_DOUBLE_EQ(out.coords()(0), 1.0 + 0.5 * 0.25);
    EXPECT_DOUBLE_EQ(out.coords()(1), -2.0 + 3.0 * 0.25);
    EXPECT_DOUBLE_EQ(out.coords()(2), 0.5);
    EXPECT_DOUBLE_EQ(out.coords()(3), 3.0);
}

TEST(Verlet, HarmonicOnePeriodReturnsToStart) {
    // 6283 steps of 2*pi/6283 (~1e-3) span exactly one period
    const long long steps = 6283;
    auto flow = separable_flow(harmonic_potential(1.0), 1, 2.0 * pi / steps, steps);
    Vector z(2);
    z << 0.8, -0.3;
    const auto out = verlet_evolve(PhaseVector(z), flow);
    EXPECT_LT((out.coords() - z).norm(), 1e-5);
}

TEST(Verlet, HarmonicMatchesClosedForm) {
    const double w = 1.7, dt = 1e-3;
    const long long steps = 2000;
    auto flow = separable_flow(harmonic_potential(w, 1.0), 1, dt, steps);
    Vector z(2);
    z << 1.0, 0.0;
    const auto out = verlet_evolve(PhaseVector(z), flow);
    const double t = dt * steps;
    EXPECT_NEAR(out.coords()(0), std::cos(w * t), 1e-5);
    EXPECT_NEAR(out.coords()(1), -w * std::sin(w * t), 1e-5);
}

TEST(Verlet, EnergyDriftBounded) {
    auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-3);
    Vector z(2);
    z << 1.0, 0.0;
    const double e0 = flow.energy(z);
    VerletStepper stepper(flow);
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
        stepper.step(z.data());
        worst = std::max(worst, std::abs(flow.energy(z) - e0) / e0);
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(Verlet, LiouvilleDeterminantIsOne) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (const auto& pot : {quartic_potential(), morse_potential(2.0, 1.2), harmonic_potential(3.0, 0.5)}) {
        for (int dof : {1, 2, 3}) {
            const auto flow = separable_flow(pot, dof, 1e-2);
            for (int trial = 0; trial < 5; ++trial) {
                Vector z(2 * dof);
                for (int i = 0; i < z.size(); ++i) z(i) = 0.5 * g(rng);
                const Matrix jac = verlet_step_jacobian(PhaseVector(z), flow);
                EXPECT_NEAR(jac.determinant(), 1.0, 1e-6) << pot.kind << " N=" << dof;
            }
        }
    }
}

TEST(Verlet, StepJacobianIsSymplectic) {
    const auto flow = separable_flow(quartic_potential(), 2, 1e-2);
    Vector z(4);
    z << 0.3, -0.7, 0.2, 0.9;
    EXPECT_LT(symplectic_defect(verlet_step_jacobian(PhaseVector(z), flow)), 1e-7);
}

TEST(Verlet, TimeReversible) {
    auto flow = separable_flow(morse_potential(1.0, 1.0), 1, 1e-2, 500);
    Vector z(2);
    z << 0.4, 0.1;
    Vector back = verlet_evolve(PhaseVector(z), flow).coords();
    back(1) = -back(1);
    Vector again = verlet_evolve(PhaseVector(back), flow).coords();
    again(1) = -again(1);
    EXPECT_LT((again - z).norm(), 1e-11);
}

TEST(Verlet, GradientFailureIsFlowError) {
    auto flow = separable_flow(harmonic_potential(1.0), 1, 1e-2);
    flow.potential_gradient = [](std::span<const double>, std::span<double>) {
        throw std::runtime_error("boom");
    };
    EXPECT_THROW(verlet_step(PhaseVector(Vector::Ones(2)), flow), FlowError);
    flow.potential_gradient = [](std::span<const double>, std::span<double> g) { g[0] = std::nan(""); };
    EXPECT_THROW(verlet_step(PhaseVector(Vector::Ones(2)), flow), FlowError);
}

TEST(Verlet, DimensionMismatch) {
    const auto flow = separable_flow(harmonic_potential(1.0), 2, 1e-2);
    EXPECT_THROW(verlet_step(PhaseVector(Vector::Ones(2)), flow), DimensionError);
}

TEST(FlowSpec, Validation) {
    EXPECT_THROW(separable_flow(harmonic_potential(1.0), 1, 0.0), InvalidArgument);
    EXPECT_THROW(separable_flow(harmonic_potential(1.0), 0, 1e-2), InvalidArgument);
    FlowSpec empty;
    EXPECT_THROW(empty.validate(), InvalidArgument);
}

TEST(GradientCheck, AcceptsAnalyticAndRejectsWrong) {
    auto flow = separable_flow(morse_potential(2.0, 0.8), 2, 1e-2);
    std::vector<Vector> pts{Vector::Zero(4), Vector::Constant(4, 0.3)};
    EXPECT_NO_THROW(check_flow_gradients(flow, pts));
    flow.kinetic_gradient = [](std::span<const double> p, std::span<double> g) {
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = 1.01 * p[i];
    };
    EXPECT_THROW(check_flow_gradients(flow, pts), FlowError);
}
