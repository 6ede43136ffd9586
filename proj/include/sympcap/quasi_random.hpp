#pragma once

// Low-discrepancy point sets: Halton sequences with a seeded random shift,
// and uniform-in-volume ball sampling built on them.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sympcap/symplectic.hpp"

namespace sympcap {

inline std::vector<int> first_primes(int count) {
    std::vector<int> primes;
    for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
        bool prime = true;
        for (int p : primes) {
            if (p * p > c) break;
            if (c % p == 0) { prime = false; break; }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

/// Radical inverse of `index` in base `base`.
inline double radical_inverse(std::uint64_t index, int base) {
    const double inv = 1.0 / base;
    double f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/** Halton sequence in [0,1)^dim with a Cranley-Patterson rotation drawn
    from `seed`.  Point k is a pure function of (k, dim, seed). */
class HaltonSequence {
public:
    HaltonSequence(int dim, std::uint64_t seed) : bases_(first_primes(dim)), shift_(dim) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& s : shift_) s = u(rng);
    }

    int dim() const { return static_cast<int>(bases_.size()); }

    void point(std::uint64_t index, double* out) const {
        // index + 1 skips the all-zero origin
        for (int d = 0; d < dim(); ++d) {
            double x = radical_inverse(index + 1, bases_[d]) + shift_[d];
            out[d] = x - std::floor(x);
        }
    }

private:
    std::vector<int> bases_;
    std::vector<double> shift_;
};

/** Uniform points of the ball |z - center| <= radius in R^{2N}: a Gaussian
    direction from Box-Muller pairs, radius u^{1/(2N)}. */
class BallSampler {
public:
    BallSampler(int dof, Vector center, double radius, std::uint64_t seed)
        : dim_(2 * dof), center_(std::move(center)), radius_(radius), halton_(2 * dof + 1, seed) {}

    int dim() const { return dim_; }

    void sample(std::uint64_t index, double* out) const {
        std::vector<double> u(static_cast<std::size_t>(dim_ + 1));
        halton_.point(index, u.data());
        double norm2 = 0.0;
        for (int k = 0; k < dim_; k += 2) {
            const double rho = std::sqrt(-2.0 * std::log(1.0 - u[k]));
            const double phi = 2.0 * std::numbers::pi * u[k + 1];
            out[k] = rho * std::cos(phi);
            out[k + 1] = rho * std::sin(phi);
            norm2 += out[k] * out[k] + out[k + 1] * out[k + 1];
        }
        const double r = radius_ * std::pow(u[dim_], 1.0 / dim_);
        const double scale = norm2 > 0.0 ? r / std::sqrt(norm2) : 0.0;
        for (int k = 0; k < dim_; ++k) out[k] = center_(k) + scale * out[k];
    }

    Vector sample(std::uint64_t index) const {
        Vector z(dim_);
        sample(index, z.data());
        return z;
    }

private:
    int dim_;
    Vector center_;
    double radius_;
    HaltonSequence halton_;
};

}  // namespace sympcap
