#pragma once

// Separable Hamiltonian flows H(q,p) = T(p) + V(q) and the Stormer-Verlet
// (kick-drift-kick) integrator.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sympcap/potentials.hpp"
#include "sympcap/symplectic.hpp"

namespace sympcap {

using ScalarField = std::function<double(std::span<const double>)>;
using GradientField = std::function<void(std::span<const double>, std::span<double>)>;

struct FlowSpec {
    int dof = 1;
    ScalarField kinetic;
    GradientField kinetic_gradient;
    ScalarField potential;
    GradientField potential_gradient;
    double dt = 1e-3;
    long long steps = 0;

    double energy(const Vector& z) const {
        return kinetic({z.data() + dof, static_cast<std::size_t>(dof)}) +
               potential({z.data(), static_cast<std::size_t>(dof)});
    }

    void validate() const {
        if (dof < 1) throw InvalidArgument("flow needs at least one degree of freedom");
        if (!kinetic || !kinetic_gradient || !potential || !potential_gradient)
            throw InvalidArgument("flow is missing an energy term or gradient");
        if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
        if (steps < 0) throw InvalidArgument("step count must be nonnegative");
    }
};

/** T = |p|^2 / 2m and V(q) = sum_i pot(q_i), i.e. `dof` uncoupled copies
    of a one-dimensional system. */
inline FlowSpec separable_flow(const Potential1D& pot, int dof, double dt, long long steps = 0) {
    pot.validate();
    if (!pot.derivative) throw InvalidArgument("potential '" + pot.kind + "' has no derivative");
    const double inv_m = 1.0 / pot.mass;
    FlowSpec f;
    f.dof = dof;
    f.kinetic = [inv_m](std::span<const double> p) {
        double s = 0.0;
        for (double x : p) s += x * x;
        return 0.5 * inv_m * s;
    };
    f.kinetic_gradient = [inv_m](std::span<const double> p, std::span<double> g) {
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = inv_m * p[i];
    };
    f.potential = [v = pot.value](std::span<const double> q) {
        double s = 0.0;
        for (double x : q) s += v(x);
        return s;
    };
    f.potential_gradient = [dv = pot.derivative](std::span<const double> q, std::span<double> g) {
        for (std::size_t i = 0; i < q.size(); ++i) g[i] = dv(q[i]);
    };
    f.dt = dt;
    f.steps = steps;
    f.validate();
    return f;
}

/// In-place Verlet stepping on raw (q, p) storage with reusable scratch.
class VerletStepper {
public:
    explicit VerletStepper(const FlowSpec& flow)
        : flow_(flow), grad_(static_cast<std::size_t>(flow.dof)) {}

    /// z holds (q, p) contiguously; advances by one step of flow.dt.
    void step(double* z) {
        const auto n = static_cast<std::size_t>(flow_.dof);
        std::span<double> q(z, n), p(z + n, n);
        const double h = flow_.dt;
        kick(q, p, 0.5 * h);
        flow_.kinetic_gradient(p, grad_);
        check(grad_, "kinetic");
        for (std::size_t i = 0; i < n; ++i) q[i] += h * grad_[i];
        kick(q, p, 0.5 * h);
    }

private:
    void kick(std::span<const double> q, std::span<double> p, double h) {
        flow_.potential_gradient(q, grad_);
        check(grad_, "potential");
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= h * grad_[i];
    }

    static void check(std::span<const double> g, const char* which) {
        for (double x : g)
            if (!std::isfinite(x)) throw FlowError(std::string(which) + " gradient is not finite");
    }

    const FlowSpec& flow_;
    std::vector<double> grad_;
};

/// One Stormer-Verlet step.
inline PhaseVector verlet_step(const PhaseVector& state, const FlowSpec& flow) {
    if (state.dof() != flow.dof) throw DimensionError("state and flow dimensions differ");
    Vector z = state.coords();
    VerletStepper stepper(flow);
    try {
        stepper.step(z.data());
    } catch (const FlowError&) {
        throw;
    } catch (const std::exception& e) {
        throw FlowError(std::string("gradient evaluation failed: ") + e.what());
    }
    return PhaseVector(std::move(z));
}

/// flow.steps Verlet steps from `state`.
inline PhaseVector verlet_evolve(const PhaseVector& state, const FlowSpec& flow) {
    if (state.dof() != flow.dof) throw DimensionError("state and flow dimensions differ");
    Vector z = state.coords();
    VerletStepper stepper(flow);
    for (long long k = 0; k < flow.steps; ++k) stepper.step(z.data());
    return PhaseVector(std::move(z));
}

/// Central-difference Jacobian of the one-step map.
inline Matrix verlet_step_jacobian(const PhaseVector& state, const FlowSpec& flow, double h = 1e-6) {
    const auto n = state.coords().size();
    Matrix jac(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector plus = state.coords(), minus = state.coords();
        const double dk = h * std::max(1.0, std::abs(state.coords()(k)));
        plus(k) += dk;
        minus(k) -= dk;
        jac.col(k) = (verlet_step(PhaseVector(plus), flow).coords() -
                      verlet_step(PhaseVector(minus), flow).coords()) / (2.0 * dk);
    }
    return jac;
}

/** Compare analytic gradients with central differences at the given points;
    throws FlowError when |fd - g| > tol * max(1, |g|). */
inline void check_flow_gradients(const FlowSpec& flow, const std::vector<Vector>& points,
                                 double tol = 1e-6) {
    const auto n = static_cast<std::size_t>(flow.dof);
    std::vector<double> g(n);
    auto check_one = [&](const ScalarField& f, const GradientField& grad, const double* x0,
                         const char* which) {
        std::vector<double> x(x0, x0 + n);
        grad(x, g);
        for (std::size_t i = 0; i < n; ++i) {
            const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
            const double xi = x[i];
            x[i] = xi + h;
            const double fp = f(x);
            x[i] = xi - h;
            const double fm = f(x);
            x[i] = xi;
            const double fd = (fp - fm) / (2.0 * h);
            if (!(std::abs(fd - g[i]) <= tol * std::max(1.0, std::abs(g[i]))))
                throw FlowError(std::string(which) + " gradient disagrees with finite differences (" +
                                std::to_string(g[i]) + " vs " + std::to_string(fd) + ")");
        }
    };
    for (const auto& z : points) {
        if (z.size() != static_cast<Eigen::Index>(2 * n)) throw DimensionError("spot point dimension");
        check_one(flow.potential, flow.potential_gradient, z.data(), "potential");
        check_one(flow.kinetic, flow.kinetic_gradient, z.data() + n, "kinetic");
    }
}

}  // namespace sympcap
