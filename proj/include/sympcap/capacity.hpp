#pragma once

// Symplectic areas (Gromov widths) of balls, cylinders, ellipsoidal energy
// shells and sets certified by a ball/cylinder sandwich.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sympcap/flow.hpp"
#include "sympcap/planes.hpp"
#include "sympcap/quasi_random.hpp"
#include "sympcap/williamson.hpp"

namespace sympcap {

/// A capacity; +infinity is a flag, never a float sentinel.
class CapacityValue {
public:
    static CapacityValue finite(double value, bool exact) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw InvalidArgument("capacity must be a finite nonnegative number");
        return CapacityValue(value, false, exact);
    }
    static CapacityValue infinity(bool exact = true) { return CapacityValue(0.0, true, exact); }

    bool is_infinite() const { return infinite_; }
    bool exact() const { return exact_; }

    double value() const {
        if (infinite_) throw InvalidArgument("capacity is infinite");
        return value_;
    }

private:
    CapacityValue(double v, bool inf, bool exact) : value_(v), infinite_(inf), exact_(exact) {}

    double value_;
    bool infinite_;
    bool exact_;
};

struct Ball {
    Vector center;
    double radius;

    Ball(Vector c, double r) : center(std::move(c)), radius(r) {
        if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
        PhaseVector check(center);
    }
    static Ball centered(int dof, double r) { return Ball(Vector::Zero(2 * dof), r); }

    int dof() const { return static_cast<int>(center.size() / 2); }
    bool contains(const Vector& z) const { return (z - center).squaredNorm() <= radius * radius; }
};

/// {z : z_a^2 + z_b^2 <= R^2} over the plane (a, b); Z_j(R) when the plane is conjugate.
struct Cylinder {
    PlaneSelector plane;
    double radius;
    int dof;

    Cylinder(PlaneSelector pl, double r, int n) : plane(pl), radius(r), dof(n) {
        if (!(radius > 0.0)) throw InvalidArgument("cylinder radius must be positive");
        if (dof < 1) throw InvalidArgument("cylinder dimension must be >= 1");
        plane.validate(dof);
    }
    /// Z_j(R), j 1-based.
    static Cylinder conjugate(int j, double r, int dof) { return Cylinder(PlaneSelector::conjugate(j), r, dof); }

    bool contains(const Vector& z, double rel_tol = 0.0) const {
        const auto [a, b] = plane.coordinates(dof);
        return z(a) * z(a) + z(b) * z(b) <= radius * radius * (1.0 + rel_tol);
    }
};

/// Interior of the energy shell H(z) = E of a positive definite quadratic H.
struct EnergyShellRegion {
    QuadraticHamiltonian hamiltonian;
    double energy;

    EnergyShellRegion(QuadraticHamiltonian h, double e) : hamiltonian(std::move(h)), energy(e) {
        if (!(energy > 0.0)) throw InvalidArgument("shell energy must be positive");
    }
    bool contains(const Vector& z) const { return hamiltonian.energy(z) <= energy; }
};

/// pi R^2 in every dimension.
inline CapacityValue capacity_ball(double radius, int dof) {
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    if (dof < 1) throw InvalidArgument("dimension must be >= 1");
    return CapacityValue::finite(std::numbers::pi * radius * radius, true);
}

/// pi^N R^{2N} / N!
inline double volume_ball(double radius, int dof) {
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    if (dof < 1) throw InvalidArgument("dimension must be >= 1");
    const double area = std::numbers::pi * radius * radius;
    double v = 1.0;
    for (int k = 1; k <= dof; ++k) v *= area / k;
    return v;
}

/// pi R^2 for a cylinder over a conjugate plane; other planes are refused.
inline CapacityValue capacity_cylinder(const Cylinder& z) {
    if (!z.plane.is_conjugate())
        throw UnsupportedRegion("capacity of a cylinder over the nonconjugate plane " + z.plane.label() +
                                " is not pi R^2 and is not implemented");
    return CapacityValue::finite(std::numbers::pi * z.radius * z.radius, true);
}

/// 2 pi E / w_max, w_max the largest symplectic eigenvalue.
inline CapacityValue capacity_ellipsoid(const EnergyShellRegion& region) {
    const Vector omegas = symplectic_spectrum(region.hamiltonian);
    return CapacityValue::finite(2.0 * std::numbers::pi * region.energy / omegas(0), true);
}

/// Closed periodic orbit of least action on a quadratic energy shell.
struct MinimalAction {
    double action;
    double frequency;  ///< angular frequency of the minimizing normal mode
    double period;
    Vector orbit_start;
    int mode;  ///< 0-based index in descending frequency order
};

/** Minimizes the loop action over the N normal-mode periodic orbits.  Each
    orbit z(t) = a cos(wt) + b sin(wt) is built from the Williamson basis and
    its action pi (a_p . b_q - b_p . a_q) is evaluated from the orbit itself. */
inline MinimalAction minimal_action_quadratic(const EnergyShellRegion& region) {
    const auto wd = williamson(region.hamiltonian);
    const int dof = wd.dof();
    const Matrix JM = standard_form(dof) * region.hamiltonian.matrix();
    std::optional<MinimalAction> best;
    for (int j = 0; j < dof; ++j) {
        const double w = wd.omegas(j);
        const Vector a = wd.normal_mode_point(j, region.energy);
        const Vector b = JM * a / w;  // zdot(0) = w b
        const double action = std::numbers::pi * (a.tail(dof).dot(b.head(dof)) - b.tail(dof).dot(a.head(dof)));
        if (!best || action < best->action)
            best = MinimalAction{action, w, 2.0 * std::numbers::pi / w, a, j};
    }
    return *best;
}

/// Sampled inclusion certificate B(R) in Omega in Z_j(R).
struct SandwichCertificate {
    Ball inner;
    Cylinder outer;
    std::function<bool(const Vector&)> membership;
    Vector box_lo;  ///< bounding box of Omega for the outer check
    Vector box_hi;
    int samples = 10000;
    std::uint64_t seed = 1;
};

struct SandwichReport {
    int inner_points_checked = 0;
    int outer_points_checked = 0;
    long long box_draws = 0;
};

struct SandwichResult {
    CapacityValue capacity;
    SandwichReport report;
};

inline SandwichResult capacity_sandwich(const SandwichCertificate& cert) {
    const int dof = cert.inner.dof();
    if (cert.outer.dof != dof) throw DimensionError("inner ball and outer cylinder dimensions differ");
    if (cert.box_lo.size() != 2 * dof || cert.box_hi.size() != 2 * dof)
        throw DimensionError("bounding box dimension differs from the ball");
    if (!cert.membership) throw InvalidArgument("certificate has no membership oracle");
    if (!cert.outer.plane.is_conjugate())
        throw UnsupportedRegion("sandwich outer set must be a cylinder over a conjugate plane");
    if (cert.samples < 1) throw InvalidArgument("sample count must be positive");
    const double R = cert.inner.radius;
    if (std::abs(cert.outer.radius - R) > 1e-12 * R)
        throw CertificateInvalid("inner ball radius differs from outer cylinder radius");
    {
        const auto [a, b] = cert.outer.plane.coordinates(dof);
        if (std::hypot(cert.inner.center(a), cert.inner.center(b)) > 1e-12 * R)
            throw CertificateInvalid("inner ball is not centered on the cylinder axis",
                                     {cert.inner.center.data(), cert.inner.center.data() + 2 * dof});
    }

    SandwichReport report;
    auto witness = [](const Vector& z) { return std::vector<double>(z.data(), z.data() + z.size()); };

    // Center first, then quasi-random interior points.
    if (!cert.membership(cert.inner.center))
        throw CertificateInvalid("oracle rejects the inner ball center", witness(cert.inner.center));
    BallSampler ball(dof, cert.inner.center, R, cert.seed);
    Vector z(2 * dof);
    for (int k = 0; k < cert.samples; ++k) {
        ball.sample(static_cast<std::uint64_t>(k), z.data());
        if (!cert.membership(z)) throw CertificateInvalid("oracle rejects a point of the inner ball", witness(z));
        ++report.inner_points_checked;
    }

    HaltonSequence box(2 * dof, cert.seed ^ 0x9e3779b97f4a7c15ULL);
    const long long max_draws = 1000LL * cert.samples;
    std::vector<double> u(static_cast<std::size_t>(2 * dof));
    while (report.outer_points_checked < cert.samples && report.box_draws < max_draws) {
        box.point(static_cast<std::uint64_t>(report.box_draws++), u.data());
        for (int d = 0; d < 2 * dof; ++d) z(d) = cert.box_lo(d) + u[d] * (cert.box_hi(d) - cert.box_lo(d));
        if (!cert.membership(z)) continue;
        if (!cert.outer.contains(z, 1e-12))
            throw CertificateInvalid("a point of the set lies outside the cylinder", witness(z));
        ++report.outer_points_checked;
    }
    if (report.outer_points_checked < cert.samples)
        throw CertificateInvalid("bounding box yielded too few points of the set");

    return {CapacityValue::finite(std::numbers::pi * R * R, true), report};
}

/// Discrete loop action sum of (p_k + p_{k+1})/2 . (q_{k+1} - q_k) over a closed polygon.
inline double closed_loop_action(const std::vector<Vector>& loop) {
    if (loop.size() < 3) throw InvalidArgument("a loop needs at least three points");
    const int dof = PhaseVector(loop.front()).dof();
    double s = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Vector& a = loop[k];
        const Vector& b = loop[(k + 1) % loop.size()];
        s += 0.5 * (a.tail(dof) + b.tail(dof)).dot(b.head(dof) - a.head(dof));
    }
    return s;
}

/** Ball B(R) at the origin united with a thin neck that runs along q_2:
    {q_1^2 + p_1^2 <= r^2, 0 <= q_2 <= 3R, remaining coordinates within r}. */
struct BordeauxBottle {
    double R;
    double r;
    int dof;

    bool contains(const Vector& z) const {
        if (z.squaredNorm() <= R * R) return true;
        if (z(0) * z(0) + z(dof) * z(dof) > r * r * (1.0 + 1e-12)) return false;
        if (z(1) < 0.0 || z(1) > 3.0 * R) return false;
        for (int k = 0; k < 2 * dof; ++k) {
            if (k == 0 || k == 1 || k == dof) continue;
            if (std::abs(z(k)) > r) return false;
        }
        return true;
    }

    /// Circle of radius r in the (q_1, p_1) plane at q_2 = 2R, traversed clockwise.
    std::vector<Vector> neck_loop(int points = 720) const {
        std::vector<Vector> loop;
        for (int k = 0; k < points; ++k) {
            const double t = 2.0 * std::numbers::pi * k / points;
            Vector z = Vector::Zero(2 * dof);
            z(0) = r * std::cos(t);
            z(dof) = -r * std::sin(t);
            z(1) = 2.0 * R;
            loop.push_back(std::move(z));
        }
        return loop;
    }
};

struct BottleFixture {
    BordeauxBottle bottle;
    SandwichCertificate certificate;
    double neck_loop_action;  ///< pi r^2
    CapacityValue capacity;   ///< pi R^2 via the sandwich
    SandwichReport report;
};

/** The nonconvex counterexample: capacity pi R^2 yet a closed loop around
    the neck has action pi r^2 < pi R^2. */
inline BottleFixture bordeaux_bottle_fixture(double R, double r, int dof = 2, int samples = 10000) {
    if (!(R > 0.0)) throw InvalidArgument("bottle radius must be positive");
    if (!(r > 0.0) || !(r < R)) throw InvalidNeck("neck radius must satisfy 0 < r < R");
    if (dof < 2) throw InvalidArgument("the bottle needs at least two degrees of freedom");
    BordeauxBottle bottle{R, r, dof};
    Vector lo = Vector::Constant(2 * dof, -R), hi = Vector::Constant(2 * dof, R);
    hi(1) = 3.0 * R;
    SandwichCertificate cert{Ball::centered(dof, R), Cylinder::conjugate(1, R, dof),
                             [bottle](const Vector& z) { return bottle.contains(z); }, lo, hi, samples, 1};
    auto result = capacity_sandwich(cert);
    return BottleFixture{bottle, cert, std::numbers::pi * r * r, result.capacity, result.report};
}

/// Options for the approximate closed-orbit search on general convex shells.
struct OrbitSearchOptions {
    int random_starts = 16;
    double max_time = 50.0;
    double closure_tol = 1e-3;  ///< relative to the start point's norm
    std::uint64_t seed = 1;
};

struct OrbitSearchResult {
    CapacityValue capacity;  ///< exact() is always false
    int orbits_found = 0;
    Vector best_start;
    double best_period = 0.0;
};

/** Upper estimate of the capacity of {H <= E} for a separable convex H with
    minimum at the origin: the least action among the near-closed Verlet
    orbits found from axis-aligned and random starting points on the shell. */
inline OrbitSearchResult estimate_capacity_orbit_search(const FlowSpec& flow, double energy,
                                                        const OrbitSearchOptions& opt = {}) {
    flow.validate();
    if (!(energy > 0.0)) throw InvalidArgument("shell energy must be positive");
    const int dof = flow.dof;
    const int n = 2 * dof;

    std::vector<Vector> directions;
    for (int k = 0; k < n; ++k) directions.push_back(Vector::Unit(n, k));
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < opt.random_starts; ++k) {
        Vector d(n);
        for (int i = 0; i < n; ++i) d(i) = gauss(rng);
        directions.push_back(d.normalized());
    }

    auto on_shell = [&](const Vector& dir) {
        double hi = 1.0;
        while (flow.energy(hi * dir) < energy) {
            hi *= 2.0;
            if (hi > 1e12) throw InvalidArgument("energy shell is not bounded along a search direction");
        }
        double lo = 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (flow.energy(mid * dir) < energy ? lo : hi) = mid;
        }
        return Vector(0.5 * (lo + hi) * dir);
    };

    OrbitSearchResult out{CapacityValue::infinity(false), 0, Vector(), 0.0};
    double best = std::numeric_limits<double>::infinity();
    const auto max_steps = static_cast<long long>(std::ceil(opt.max_time / flow.dt));
    std::vector<double> grad(static_cast<std::size_t>(dof));
    for (const auto& dir : directions) {
        const Vector z0 = on_shell(dir);
        const double tol = opt.closure_tol * z0.norm();
        Vector z = z0;
        VerletStepper stepper(flow);
        double action = 0.0, prev_d = 0.0;
        bool left = false, descending = false;
        for (long long s = 1; s <= max_steps; ++s) {
            const Vector q_before = z.head(dof);
            stepper.step(z.data());
            // q advanced by dt * grad T(p_half); recover p_half from the step
            const Vector dq = z.head(dof) - q_before;
            flow.potential_gradient({z.data(), static_cast<std::size_t>(dof)}, grad);
            Vector p_half = z.tail(dof);
            for (int i = 0; i < dof; ++i) p_half(i) += 0.5 * flow.dt * grad[static_cast<std::size_t>(i)];
            const double step_action = p_half.dot(dq);
            const double d = (z - z0).norm();
            if (!left) {
                left = d > 10.0 * tol;
            } else if (d < prev_d) {
                descending = true;
            } else if (descending) {
                // prev step was a local minimum of the distance to the start
                if (prev_d < tol) {
                    ++out.orbits_found;
                    if (action < best) {
                        best = action;
                        out.best_start = z0;
                        out.best_period = (s - 1) * flow.dt;
                    }
                    break;
                }
                descending = false;
            }
            action += step_action;
            prev_d = d;
        }
    }
    if (out.orbits_found == 0)
        throw NumericalDegeneracy("no closed orbit found on the energy shell");
    out.capacity = CapacityValue::finite(best, false);
    return out;
}

}  // namespace sympcap
