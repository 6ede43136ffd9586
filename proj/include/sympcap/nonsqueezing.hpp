#pragma once

// Shadows (orthogonal projections onto coordinate planes) of a ball under
// linear symplectic maps, computed exactly, and under nonlinear separable
// Hamiltonian flows, estimated by grid occupancy of advected samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "sympcap/capacity.hpp"
#include "sympcap/flow.hpp"
#include "sympcap/planes.hpp"
#include "sympcap/quasi_random.hpp"
#include "sympcap/symplectic.hpp"

namespace sympcap {

enum class ShadowMethod { exact_ellipse, grid_estimate };

inline const char* to_string(ShadowMethod m) {
    return m == ShadowMethod::exact_ellipse ? "exact-ellipse" : "grid-estimate";
}

struct ShadowReport {
    PlaneSelector plane;
    double time = 0.0;
    double area = 0.0;
    double bound = 0.0;     ///< pi R^2
    double tolerance = 0.0; ///< relative slack used for `satisfied`
    bool satisfied = false; ///< area >= bound * (1 - tolerance)
    ShadowMethod method = ShadowMethod::exact_ellipse;
};

/** det of the 2x2 block of S S^T on the plane's rows, via Cauchy-Binet as a
    sum of squared 2x2 minors of those two rows of S. */
inline double plane_block_determinant(const Matrix& s, const PlaneSelector& plane) {
    const int dof = dof_of(s);
    const auto [a, b] = plane.coordinates(dof);
    long double sum = 0.0L;
    for (Eigen::Index k = 0; k < s.cols(); ++k)
        for (Eigen::Index l = k + 1; l < s.cols(); ++l) {
            const long double minor = static_cast<long double>(s(a, k)) * s(b, l) -
                                      static_cast<long double>(s(a, l)) * s(b, k);
            sum += minor * minor;
        }
    return static_cast<double>(sum);
}

inline constexpr double kLinearShadowTol = 1e-9;

/// Projection of S(B(R)) onto the plane: an ellipse of area pi R^2 sqrt(det (S S^T)_plane).
inline ShadowReport linear_shadow_area(const SymplecticMatrix& s, double radius, const PlaneSelector& plane) {
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    const double bound = std::numbers::pi * radius * radius;
    const double area = bound * std::sqrt(plane_block_determinant(s.matrix(), plane));
    return ShadowReport{plane, 0.0, area, bound, kLinearShadowTol,
                        area >= bound * (1.0 - kLinearShadowTol), ShadowMethod::exact_ellipse};
}

/// Every coordinate plane of R^{2N} other than the conjugate ones.
inline std::vector<PlaneSelector> nonconjugate_planes(int dof) {
    std::vector<PlaneSelector> planes;
    for (int i = 1; i <= dof; ++i)
        for (int j = i + 1; j <= dof; ++j) {
            planes.push_back(PlaneSelector::positions(i, j));
            planes.push_back(PlaneSelector::momenta(i, j));
        }
    for (int i = 1; i <= dof; ++i)
        for (int j = 1; j <= dof; ++j)
            if (i != j) planes.push_back(PlaneSelector::mixed(i, j));
    return planes;
}

inline std::vector<PlaneSelector> conjugate_planes(int dof) {
    std::vector<PlaneSelector> planes;
    for (int j = 1; j <= dof; ++j) planes.push_back(PlaneSelector::conjugate(j));
    return planes;
}

struct PlaneWitness {
    int member;
    PlaneSelector plane;
    double determinant;
};

struct EnsembleSummary {
    int dof = 0;
    int count = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    PlaneWitness min_conjugate{};
    std::optional<PlaneWitness> min_nonconjugate;  ///< absent when N = 1
    double max_defect = 0.0;
    bool conjugate_bound_holds = false;  ///< min conjugate det >= 1 - 1e-9
};

/** Draws `count` random symplectic matrices (member k from the k-th seed of
    a generator seeded with `seed`) and records the smallest conjugate and
    nonconjugate block determinants of S S^T. */
inline EnsembleSummary nonsqueeze_ensemble(int dof, int count, double sigma, std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("ensemble count must be positive");
    EnsembleSummary out;
    out.dof = dof;
    out.count = count;
    out.sigma = sigma;
    out.seed = seed;
    out.min_conjugate.determinant = std::numeric_limits<double>::infinity();
    const auto conj = conjugate_planes(dof);
    const auto nonconj = nonconjugate_planes(dof);
    std::mt19937_64 seeds(seed);
    for (int k = 0; k < count; ++k) {
        const auto s = random_symplectic(dof, sigma, seeds());
        out.max_defect = std::max(out.max_defect, s.defect());
        for (const auto& pl : conj) {
            const double d = plane_block_determinant(s.matrix(), pl);
            if (d < out.min_conjugate.determinant) out.min_conjugate = {k, pl, d};
        }
        for (const auto& pl : nonconj) {
            const double d = plane_block_determinant(s.matrix(), pl);
            if (!out.min_nonconjugate || d < out.min_nonconjugate->determinant)
                out.min_nonconjugate = PlaneWitness{k, pl, d};
        }
    }
    out.conjugate_bound_holds = out.min_conjugate.determinant >= 1.0 - kLinearShadowTol;
    return out;
}

/// Worker count: hardware threads, capped by SYMPCAP_THREADS when set.
inline int worker_count(long long work_items) {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SYMPCAP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return static_cast<int>(std::max(1LL, std::min<long long>(n, work_items)));
}

struct ProjectedCloud {
    double time;
    std::vector<double> x;
    std::vector<double> y;
};

struct EvolveOptions {
    std::uint64_t seed = 1;
    int threads = 0;                             ///< 0: worker_count()
    std::vector<ProjectedCloud>* clouds = nullptr;  ///< filled with projected points when set
};

inline constexpr double kGridRelTolerance = 0.05;

/** Advects quasi-random interior points of `ball` with Verlet and, at each
    snapshot time, rasterizes their projection on `plane` into square cells of
    side `grid_cell`; area = occupied cells * grid_cell^2.  Deterministic for
    a given seed regardless of the worker count. */
inline std::vector<ShadowReport> evolve_ball_shadow(const Ball& ball, const FlowSpec& flow,
                                                    const PlaneSelector& plane, long long samples,
                                                    double grid_cell, const std::vector<double>& snapshot_times,
                                                    const EvolveOptions& options = {}) {
    flow.validate();
    const int dof = ball.dof();
    if (flow.dof != dof) throw DimensionError("ball and flow dimensions differ");
    plane.validate(dof);
    if (samples < 1) throw InvalidArgument("sample count must be positive");
    if (!(grid_cell > 0.0)) throw InvalidArgument("grid cell must be positive");
    if (snapshot_times.empty()) throw InvalidArgument("no snapshot times given");

    std::vector<long long> snapshot_steps;
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        const double t = snapshot_times[k];
        if (!(t >= 0.0)) throw InvalidArgument("snapshot times must be nonnegative");
        if (k > 0 && !(t > snapshot_times[k - 1])) throw InvalidArgument("snapshot times must increase");
        const long long steps = std::llround(t / flow.dt);
        if (std::abs(static_cast<double>(steps) * flow.dt - t) > 1e-9 * std::max(1.0, t))
            throw InvalidArgument("snapshot time " + std::to_string(t) + " is not a multiple of dt");
        snapshot_steps.push_back(steps);
    }

    BallSampler sampler(dof, ball.center, ball.radius, options.seed);
    {
        std::vector<Vector> spots{ball.center};
        for (int k = 0; k < 4; ++k) spots.push_back(sampler.sample(static_cast<std::uint64_t>(k)));
        check_flow_gradients(flow, spots);
    }

    const auto [ia, ib] = plane.coordinates(dof);
    const std::size_t n_snap = snapshot_steps.size();
    const int workers = options.threads > 0 ? options.threads : worker_count(samples);
    using CellSet = std::unordered_set<std::int64_t>;
    std::vector<std::vector<CellSet>> cells(static_cast<std::size_t>(workers), std::vector<CellSet>(n_snap));
    std::vector<double> diverged_at(static_cast<std::size_t>(workers), std::numeric_limits<double>::infinity());
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));

    const bool keep = options.clouds != nullptr;
    std::vector<std::vector<double>> px, py;
    if (keep) {
        px.assign(n_snap, std::vector<double>(static_cast<std::size_t>(samples)));
        py.assign(n_snap, std::vector<double>(static_cast<std::size_t>(samples)));
    }

    auto cell_key = [grid_cell](double x, double y) {
        const auto ix = static_cast<std::int64_t>(std::floor(x / grid_cell));
        const auto iy = static_cast<std::int64_t>(std::floor(y / grid_cell));
        return (ix << 32) ^ (iy & 0xffffffffLL);
    };

    auto work = [&](int w) {
        try {
            const long long begin = samples * w / workers, end = samples * (w + 1) / workers;
            VerletStepper stepper(flow);
            Vector z(2 * dof);
            for (long long i = begin; i < end; ++i) {
                sampler.sample(static_cast<std::uint64_t>(i), z.data());
                long long done = 0;
                for (std::size_t s = 0; s < n_snap; ++s) {
                    bool blown = false;
                    for (; done < snapshot_steps[s] && !blown; ++done) {
                        try {
                            stepper.step(z.data());
                        } catch (const FlowError&) {
                            blown = true;  // gradient overflowed mid-step
                        }
                        blown = blown || !z.allFinite();
                    }
                    if (blown) {
                        diverged_at[static_cast<std::size_t>(w)] = std::min(
                            diverged_at[static_cast<std::size_t>(w)], static_cast<double>(done) * flow.dt);
                        break;
                    }
                    cells[static_cast<std::size_t>(w)][s].insert(cell_key(z(ia), z(ib)));
                    if (keep) {
                        px[s][static_cast<std::size_t>(i)] = z(ia);
                        py[s][static_cast<std::size_t>(i)] = z(ib);
                    }
                }
            }
        } catch (...) {
            failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    const double first_divergence = *std::min_element(diverged_at.begin(), diverged_at.end());
    if (std::isfinite(first_divergence))
        throw FlowDiverged("trajectory became non-finite by t = " + std::to_string(first_divergence),
                           first_divergence);

    const double bound = std::numbers::pi * ball.radius * ball.radius;
    const double tol = kGridRelTolerance + 2.0 * grid_cell / ball.radius;
    std::vector<ShadowReport> reports;
    for (std::size_t s = 0; s < n_snap; ++s) {
        CellSet merged = std::move(cells[0][s]);
        for (int w = 1; w < workers; ++w) merged.merge(cells[static_cast<std::size_t>(w)][s]);
        const double area = static_cast<double>(merged.size()) * grid_cell * grid_cell;
        reports.push_back(ShadowReport{plane, snapshot_times[s], area, bound, tol, area >= bound * (1.0 - tol),
                                       ShadowMethod::grid_estimate});
        if (keep) options.clouds->push_back({snapshot_times[s], std::move(px[s]), std::move(py[s])});
    }
    return reports;
}

}  // namespace sympcap
