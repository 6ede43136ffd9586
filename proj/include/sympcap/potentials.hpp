#pragma once

// One-dimensional potentials V(q) with mass, a confining bracket and, where
// known, the location of the minimum.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympcap/errors.hpp"

namespace sympcap {

struct Potential1D {
    std::string kind;
    std::function<double(double)> value;
    std::function<double(double)> derivative;  ///< optional; needed by flows
    double mass = 1.0;
    double lo = -10.0;  ///< domain bracket
    double hi = 10.0;
    std::optional<double> minimum_hint;

    double operator()(double q) const { return value(q); }

    void validate() const {
        if (!value) throw InvalidArgument("potential has no value function");
        if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
        if (!(lo < hi)) throw InvalidArgument("potential bracket must satisfy lo < hi");
    }
};

/// V = m w^2 q^2 / 2
inline Potential1D harmonic_potential(double omega, double mass = 1.0) {
    if (!(omega > 0.0)) throw InvalidArgument("harmonic frequency must be positive");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    const double k = mass * omega * omega;
    // edges sit where V reaches 1e8
    const double edge = std::sqrt(2e8 / k);
    return Potential1D{"harmonic", [k](double q) { return 0.5 * k * q * q; },
                       [k](double q) { return k * q; }, mass, -edge, edge, 0.0};
}

/// V = D (1 - exp(-a (q - q0)))^2; bound levels lie below D.
inline Potential1D morse_potential(double depth, double a, double mass = 1.0, double q0 = 0.0) {
    if (!(depth > 0.0) || !(a > 0.0)) throw InvalidArgument("Morse depth and width must be positive");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    auto v = [=](double q) {
        const double s = 1.0 - std::exp(-a * (q - q0));
        return depth * s * s;
    };
    auto dv = [=](double q) {
        const double e = std::exp(-a * (q - q0));
        return 2.0 * depth * a * (1.0 - e) * e;
    };
    // left edge where V = 1e4 D, right edge deep in the dissociation plateau
    const double lo = q0 - std::log(1.0 + 100.0) / a;
    const double hi = q0 + 40.0 / a;
    return Potential1D{"morse", v, dv, mass, lo, hi, q0};
}

/// V = c q^4 (c = 1/4 by default).
inline Potential1D quartic_potential(double coefficient = 0.25, double mass = 1.0) {
    if (!(coefficient > 0.0)) throw InvalidArgument("quartic coefficient must be positive");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    const double edge = std::pow(1e8 / coefficient, 0.25);
    return Potential1D{"quartic", [coefficient](double q) { return coefficient * q * q * q * q; },
                       [coefficient](double q) { return 4.0 * coefficient * q * q * q; }, mass,
                       -edge, edge, 0.0};
}

/// V = sum_k c_k q^k on [lo, hi].
inline Potential1D polynomial_potential(std::vector<double> coeffs, double mass, double lo, double hi) {
    if (coeffs.empty()) throw InvalidArgument("polynomial potential needs coefficients");
    auto v = [coeffs](double q) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * q + *it;
        return acc;
    };
    auto dv = [coeffs](double q) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size() - 1; k >= 1; --k) acc = acc * q + static_cast<double>(k) * coeffs[k];
        return acc;
    };
    Potential1D pot{"polynomial", v, dv, mass, lo, hi, std::nullopt};
    pot.validate();
    return pot;
}

}  // namespace sympcap
