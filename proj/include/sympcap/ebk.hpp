#pragma once

// Quantum-blob and EBK quantization: oscillator spectra from symplectic
// eigenvalues, one-dimensional action integrals with a Maslov correction of 2
// per librational loop, separable products, and the oscillator density of
// states.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympcap/capacity.hpp"
#include "sympcap/potentials.hpp"
#include "sympcap/quadrature.hpp"
#include "sympcap/williamson.hpp"

namespace sympcap {

struct PlanckConfig {
    double hbar = 1.0;

    explicit PlanckConfig(double hb = 1.0) : hbar(hb) {
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
    }
    double h() const { return 2.0 * std::numbers::pi * hbar; }
};

/// Maslov index of a single librational loop (two caustic touches).
inline constexpr int kLibrationMaslov = 2;

struct SpectrumEntry {
    std::vector<int> quanta;
    double energy = 0.0;
    std::vector<double> actions;      ///< basis-loop actions, one per degree of freedom
    std::vector<int> maslov;          ///< Maslov index per basis loop
    std::vector<double> frequencies;  ///< mode frequencies (quadratic path only)
};

struct SpectrumResult {
    std::vector<SpectrumEntry> entries;
    double hbar = 1.0;
    std::vector<std::string> notices;
};

/** n when |cap - (n + 1/2) h| <= tol h for exactly one integer n >= 0. */
inline std::optional<int> blob_check(const CapacityValue& cap, const PlanckConfig& cfg, double tol) {
    if (cap.is_infinite()) throw NotABlob("an infinite capacity is not a quantum blob");
    if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
    const double x = cap.value() / cfg.h() - 0.5;
    std::optional<int> hit;
    const auto centre = static_cast<long long>(std::llround(x));
    for (long long n = std::max(0LL, centre - 1); n <= centre + 1; ++n) {
        if (std::abs(x - static_cast<double>(n)) <= tol) {
            if (hit) return std::nullopt;
            hit = static_cast<int>(n);
        }
    }
    return hit;
}

/** Energy sum_j (n_j + 1/2) hbar w_j with w_j the symplectic eigenvalues.
    Quanta are matched to modes in ascending frequency order. */
inline SpectrumEntry quantize_quadratic(const QuadraticHamiltonian& ham, const std::vector<int>& quanta,
                                        const PlanckConfig& cfg) {
    const int dof = ham.dof();
    if (static_cast<int>(quanta.size()) != dof)
        throw DimensionError("expected " + std::to_string(dof) + " quantum numbers");
    for (int n : quanta)
        if (n < 0) throw InvalidArgument("quantum numbers must be nonnegative");
    const Vector desc = symplectic_spectrum(ham);
    SpectrumEntry e;
    e.quanta = quanta;
    for (int j = 0; j < dof; ++j) {
        const double w = desc(dof - 1 - j);
        const double mode_energy = (quanta[static_cast<std::size_t>(j)] + 0.5) * cfg.hbar * w;
        const double action_variable = mode_energy / w;  // I_j
        e.energy += mode_energy;
        // the circle P^2 + Q^2 = 2 I_j bounds the cylinder Z_j(sqrt(2 I_j))
        e.actions.push_back(2.0 * std::numbers::pi * action_variable);
        e.maslov.push_back(kLibrationMaslov);
        e.frequencies.push_back(w);
    }
    return e;
}

namespace detail {

inline std::pair<double, double> locate_minimum(const Potential1D& pot) {
    if (pot.minimum_hint) return {*pot.minimum_hint, pot(*pot.minimum_hint)};
    constexpr int grid = 4000;
    const double step = (pot.hi - pot.lo) / grid;
    int best = 0;
    double vbest = pot(pot.lo);
    for (int k = 1; k <= grid; ++k) {
        const double v = pot(pot.lo + k * step);
        if (v < vbest) { vbest = v; best = k; }
    }
    // golden-section refinement on the neighbouring cells
    double a = pot.lo + std::max(0, best - 1) * step, b = pot.lo + std::min(grid, best + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (pot(c) < pot(d)) { b = d; } else { a = c; }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    const double q = 0.5 * (a + b);
    return {q, pot(q)};
}

// Bisection to adjacent doubles; f(lo) and f(hi) have opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

}  // namespace detail

inline double potential_minimum(const Potential1D& pot) { return detail::locate_minimum(pot).second; }

/** Classical turning points q_- < q_+ with V(q_+-) = E, found by scanning
    outward from the minimum on a geometric grid and bisecting the brackets. */
inline std::pair<double, double> turning_points(const Potential1D& pot, double energy) {
    pot.validate();
    const auto [qmin, vmin] = detail::locate_minimum(pot);
    if (!(energy > vmin))
        throw NoClassicalRegion("energy " + std::to_string(energy) + " is not above the potential minimum " +
                                std::to_string(vmin));
    if (!(pot(pot.lo) > energy) || !(pot(pot.hi) > energy))
        throw LevelNotBound("energy " + std::to_string(energy) + " is not confined by the potential bracket");

    // ordered grid lo .. qmin .. hi, dense near the minimum
    std::vector<double> grid{pot.lo};
    {
        std::vector<double> left, right;
        const double d0 = 1e-9 * (pot.hi - pot.lo);
        for (double d = d0; qmin - d > pot.lo; d *= 1.05) left.push_back(qmin - d);
        for (double d = d0; qmin + d < pot.hi; d *= 1.05) right.push_back(qmin + d);
        grid.insert(grid.end(), left.rbegin(), left.rend());
        grid.push_back(qmin);
        grid.insert(grid.end(), right.begin(), right.end());
        grid.push_back(pot.hi);
    }
    auto f = [&](double q) { return pot(q) - energy; };
    std::vector<std::pair<double, double>> crossings;
    double prev = f(grid.front());
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double cur = f(grid[k]);
        if ((cur > 0.0) != (prev > 0.0)) crossings.emplace_back(grid[k - 1], grid[k]);
        prev = cur;
    }
    if (crossings.size() > 2)
        throw MultiWell("found " + std::to_string(crossings.size()) +
                        " turning points; only single-well potentials are supported");
    if (crossings.size() != 2) throw NoClassicalRegion("could not bracket two turning points");
    return {detail::bisect(f, crossings[0].first, crossings[0].second),
            detail::bisect(f, crossings[1].first, crossings[1].second)};
}

inline constexpr int kActionQuadratureOrder = 256;

/** Loop action 2 int_{q-}^{q+} sqrt(2m(E - V)) dq.  The substitution
    q = mid + half sin(theta) removes the square-root endpoint behaviour. */
inline double action_integral(const Potential1D& pot, double energy, int order = kActionQuadratureOrder) {
    const auto [qm, qp] = turning_points(pot, energy);
    const double mid = 0.5 * (qm + qp), half = 0.5 * (qp - qm);
    const double two_m = 2.0 * pot.mass;
    auto integrand = [&](double theta) {
        const double kinetic = energy - pot(mid + half * std::sin(theta));
        return std::sqrt(two_m * std::max(kinetic, 0.0)) * half * std::cos(theta);
    };
    return 2.0 * gauss_legendre(order).integrate(integrand, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
}

namespace detail {

class ActionCurve {
public:
    explicit ActionCurve(const Potential1D& pot) : pot_(pot) {}

    double operator()(double energy) {
        const double a = action_integral(pot_, energy);
        auto [it, inserted] = seen_.emplace(energy, a);
        if (inserted) {
            // neighbours closer than quadrature round-off may tie or swap
            const double slack = 1e-11 * std::max(1.0, std::abs(a));
            if (it != seen_.begin() && std::prev(it)->second > a + slack)
                throw NonMonotoneAction("action does not increase with energy near E = " + std::to_string(energy));
            if (std::next(it) != seen_.end() && a > std::next(it)->second + slack)
                throw NonMonotoneAction("action does not increase with energy near E = " + std::to_string(energy));
        }
        return a;
    }

private:
    const Potential1D& pot_;
    std::map<double, double> seen_;
};

}  // namespace detail

/** Energy of the n-th EBK level: the root of action(E) = (n + 1/2) h.
    Bracket grown geometrically from the minimum, bisection, then secant polish. */
inline SpectrumEntry level_1d(const Potential1D& pot, int n, const PlanckConfig& cfg) {
    pot.validate();
    if (n < 0) throw InvalidArgument("quantum number must be nonnegative");
    const double target = (n + 0.5) * cfg.h();
    const double vmin = potential_minimum(pot);
    const double ceiling = std::min(pot(pot.lo), pot(pot.hi));
    detail::ActionCurve action(pot);

    double lo = vmin, alo = 0.0;
    double width = 1e-3 * std::max(1.0, std::abs(vmin));
    double hi = vmin + width, ahi = 0.0;
    for (;;) {
        if (!(hi < ceiling)) {
            hi = vmin + (ceiling - vmin) * (1.0 - 1e-9);
            ahi = action(hi);
            if (ahi < target)
                throw LevelNotBound("level n = " + std::to_string(n) + " lies above the confining threshold " +
                                    std::to_string(ceiling));
            break;
        }
        ahi = action(hi);
        if (ahi >= target) break;
        lo = hi;
        alo = ahi;
        width *= 2.0;
        hi = vmin + width;
    }

    const double scale = std::max(std::abs(hi), hi - vmin);
    while (hi - lo > 1e-6 * scale) {
        const double mid = 0.5 * (lo + hi);
        const double am = action(mid);
        if (am < target) { lo = mid; alo = am; } else { hi = mid; ahi = am; }
    }
    // secant on the bracket, falling back to bisection if a step leaves it
    double e0 = lo, a0 = alo - target, e1 = hi, a1 = ahi - target;
    double root = std::abs(a0) < std::abs(a1) ? e0 : e1;
    for (int it = 0; it < 60; ++it) {
        if (a1 == a0) break;
        double next = e1 - a1 * (e1 - e0) / (a1 - a0);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double an = action(next) - target;
        if (an < 0.0) lo = next; else hi = next;
        const double step = std::abs(next - e1);
        e0 = e1; a0 = a1;
        e1 = next; a1 = an;
        root = next;
        if (an == 0.0 || step <= 1e-15 * scale) break;
    }

    SpectrumEntry e;
    e.quanta = {n};
    e.energy = root;
    e.actions = {action_integral(pot, root)};
    e.maslov = {kLibrationMaslov};
    return e;
}

/// Levels n = 0..n_max; unbound levels end the list with a notice.
inline SpectrumResult spectrum_1d(const Potential1D& pot, int n_max, const PlanckConfig& cfg) {
    if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
    SpectrumResult out;
    out.hbar = cfg.hbar;
    for (int n = 0; n <= n_max; ++n) {
        try {
            out.entries.push_back(level_1d(pot, n, cfg));
        } catch (const LevelNotBound& e) {
            out.notices.push_back("level " + std::to_string(n) + " and above not bound: " + e.what());
            break;
        }
    }
    if (!out.entries.empty()) {
        // action must increase on a sampled grid below the top level
        const double vmin = potential_minimum(pot);
        const double top = out.entries.back().energy;
        double prev = 0.0;
        for (int k = 1; k <= 32; ++k) {
            const double a = action_integral(pot, vmin + (top - vmin) * k / 32.0);
            if (!(a > prev)) throw NonMonotoneAction("action is not increasing below E = " + std::to_string(top));
            prev = a;
        }
    }
    for (std::size_t k = 1; k < out.entries.size(); ++k)
        if (!(out.entries[k].energy > out.entries[k - 1].energy))
            throw NonMonotoneAction("EBK energies are not strictly increasing");
    return out;
}

/// Uncoupled sum of one-dimensional systems: E = sum_j E_{n_j}^{(j)}.
inline SpectrumEntry spectrum_separable(const std::vector<Potential1D>& pots, const std::vector<int>& quanta,
                                        const PlanckConfig& cfg) {
    if (pots.empty()) throw InvalidArgument("no components given");
    if (pots.size() != quanta.size()) throw DimensionError("one quantum number per component is required");
    SpectrumEntry e;
    e.quanta = quanta;
    for (std::size_t j = 0; j < pots.size(); ++j) {
        const auto level = level_1d(pots[j], quanta[j], cfg);
        e.energy += level.energy;
        e.actions.push_back(level.actions.front());
        e.maslov.push_back(kLibrationMaslov);
    }
    return e;
}

struct LoopRecord {
    std::vector<int> nu;  ///< winding numbers on the basis loops
    double action = 0.0;
    int maslov = 0;        ///< 2 * sum nu_j
    double ebk_value = 0.0;  ///< action / h - maslov / 4
    bool ebk_integer = false;  ///< ebk_value is an integer >= 0 within 1e-8
};

/** Action of the loop sum_j nu_j eps_j on a quantized torus and its EBK test. */
inline LoopRecord loop_action(const std::vector<double>& basis_actions, const std::vector<int>& nu,
                              const PlanckConfig& cfg) {
    if (basis_actions.size() != nu.size()) throw DimensionError("one winding number per basis loop is required");
    LoopRecord r;
    r.nu = nu;
    int winding = 0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        r.action += nu[j] * basis_actions[j];
        winding += nu[j];
    }
    r.maslov = 2 * winding;
    r.ebk_value = r.action / cfg.h() - 0.25 * r.maslov;
    const double nearest = std::round(r.ebk_value);
    r.ebk_integer = std::abs(r.ebk_value - nearest) <= 1e-8 && nearest >= 0.0;
    return r;
}

inline double relative_spread(const Vector& w) { return (w.maxCoeff() - w.minCoeff()) / w.maxCoeff(); }

/// Lebesgue volume of {H <= E}: (2 pi E)^N / (N! prod w_j).
inline double phase_space_volume(const QuadraticHamiltonian& ham, double energy) {
    if (!(energy > 0.0)) throw InvalidArgument("energy must be positive");
    const Vector w = symplectic_spectrum(ham);
    const int dof = ham.dof();
    const double geometric_mean = std::exp(w.array().log().mean());
    return volume_ball(std::sqrt(2.0 * energy / geometric_mean), dof);
}

/// g(E) = (1 / hbar w)^N E^{N-1} / (N-1)! for N identical oscillators.
inline double density_of_states(const QuadraticHamiltonian& ham, double energy, const PlanckConfig& cfg) {
    if (!(energy > 0.0)) throw InvalidArgument("energy must be positive");
    const Vector w = symplectic_spectrum(ham);
    if (relative_spread(w) > 1e-10)
        throw UnsupportedForClosedForm("closed-form density of states needs equal frequencies");
    const int dof = ham.dof();
    const double omega = w.mean();
    double g = 1.0;
    for (int k = 1; k < dof; ++k) g *= energy / k;
    return g / std::pow(cfg.hbar * omega, dof);
}

/// Central difference of Vol(E) / h^N; valid for any positive definite H.
inline double density_of_states_numerical(const QuadraticHamiltonian& ham, double energy,
                                          const PlanckConfig& cfg, double rel_step = 1e-4) {
    if (!(energy > 0.0)) throw InvalidArgument("energy must be positive");
    const double dE = rel_step * energy;
    const double cells = std::pow(cfg.h(), ham.dof());
    return (phase_space_volume(ham, energy + dE) - phase_space_volume(ham, energy - dE)) / (2.0 * dE * cells);
}

}  // namespace sympcap
