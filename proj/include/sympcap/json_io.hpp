#pragma once

// JSON and CSV encodings of matrices, regions, potentials and results.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sympcap/capacity.hpp"
#include "sympcap/ebk.hpp"
#include "sympcap/nonsqueezing.hpp"

namespace sympcap::io {

using Json = nlohmann::json;

/// 17 significant digits, the fixed CSV float format.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// {"n": N, "matrix": [row-major 4N^2 reals]}
inline Json matrix_to_json(const Matrix& m) {
    const int dof = dof_of(m);
    Json values = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
    return Json{{"n", dof}, {"matrix", values}};
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("matrix"))
        throw InvalidArgument("matrix JSON needs fields \"n\" and \"matrix\"");
    const int dof = j.at("n").get<int>();
    if (dof < 1 || dof > kMaxDof) throw DimensionError("matrix \"n\" must be in 1..32");
    const auto& values = j.at("matrix");
    const auto side = static_cast<std::size_t>(2 * dof);
    if (!values.is_array() || values.size() != side * side)
        throw DimensionError("matrix array must hold 4N^2 = " + std::to_string(side * side) + " reals");
    Matrix m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
    for (std::size_t k = 0; k < values.size(); ++k)
        m(static_cast<Eigen::Index>(k / side), static_cast<Eigen::Index>(k % side)) = values[k].get<double>();
    return m;
}

inline Json capacity_to_json(const CapacityValue& c) {
    Json out;
    if (c.is_infinite()) out["value"] = "inf"; else out["value"] = c.value();
    out["exact"] = c.exact();
    return out;
}

inline CapacityValue capacity_from_json(const Json& j) {
    const bool exact = j.value("exact", true);
    const auto& v = j.at("value");
    if (v.is_string()) {
        if (v.get<std::string>() != "inf") throw InvalidArgument("capacity value must be a number or \"inf\"");
        return CapacityValue::infinity(exact);
    }
    return CapacityValue::finite(v.get<double>(), exact);
}

inline double number(const Json& j, const char* key) {
    if (!j.contains(key)) throw InvalidArgument(std::string("missing field \"") + key + "\"");
    return j.at(key).get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

/** Potentials: {"kind": "harmonic", "omega", "mass"}, {"kind": "morse", "D",
    "a", "mass", "q0"}, {"kind": "quartic", "c", "mass"},
    {"kind": "polynomial", "coeffs": [...], "mass", "lo", "hi"}. */
inline Potential1D potential_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("potential needs a \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    const double mass = number_or(j, "mass", 1.0);
    if (kind == "harmonic") return harmonic_potential(number(j, "omega"), mass);
    if (kind == "morse") return morse_potential(number(j, "D"), number(j, "a"), mass, number_or(j, "q0", 0.0));
    if (kind == "quartic") return quartic_potential(number_or(j, "c", 0.25), mass);
    if (kind == "polynomial") {
        if (!j.contains("coeffs")) throw InvalidArgument("polynomial potential needs \"coeffs\"");
        return polynomial_potential(j.at("coeffs").get<std::vector<double>>(), mass, number_or(j, "lo", -10.0),
                                    number_or(j, "hi", 10.0));
    }
    throw InvalidArgument("unknown potential kind '" + kind + "'");
}

/** Hamiltonians: {"n","matrix"}, {"omegas": [...]} (normal form) or
    {"oscillator": {"N", "m", "omega"}}. */
inline QuadraticHamiltonian hamiltonian_from_json(const Json& j) {
    if (j.contains("matrix")) return QuadraticHamiltonian(matrix_from_json(j));
    if (j.contains("omegas")) {
        const auto w = j.at("omegas").get<std::vector<double>>();
        if (w.empty()) throw InvalidArgument("\"omegas\" must not be empty");
        for (double x : w)
            if (!(x > 0.0)) throw InvalidArgument("frequencies must be positive");
        return QuadraticHamiltonian::normal_form(Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())));
    }
    if (j.contains("oscillator")) {
        const auto& o = j.at("oscillator");
        return QuadraticHamiltonian::oscillator(o.value("N", 1), number_or(o, "m", 1.0), number(o, "omega"));
    }
    throw InvalidArgument("Hamiltonian JSON needs \"matrix\", \"omegas\" or \"oscillator\"");
}

/** Regions: {"type":"ball","R","N"}, {"type":"cylinder","j","R","N"} (or
    "plane" label), {"type":"ellipsoid","hamiltonian":{...},"E"},
    {"type":"bottle","R","r","N"}. */
inline CapacityValue capacity_of_region(const Json& j) {
    if (!j.is_object() || !j.contains("type")) throw InvalidArgument("region needs a \"type\"");
    const auto type = j.at("type").get<std::string>();
    if (type == "ball") return capacity_ball(number(j, "R"), j.value("N", 1));
    if (type == "cylinder") {
        const int dof = j.value("N", 1);
        const auto plane = j.contains("plane") ? PlaneSelector::parse(j.at("plane").get<std::string>())
                                               : PlaneSelector::conjugate(j.value("j", 1));
        return capacity_cylinder(Cylinder(plane, number(j, "R"), dof));
    }
    if (type == "ellipsoid") {
        if (!j.contains("hamiltonian")) throw InvalidArgument("ellipsoid region needs \"hamiltonian\"");
        return capacity_ellipsoid(EnergyShellRegion(hamiltonian_from_json(j.at("hamiltonian")), number(j, "E")));
    }
    if (type == "bottle") return bordeaux_bottle_fixture(number(j, "R"), number(j, "r"), j.value("N", 2)).capacity;
    throw InvalidArgument("unknown region type '" + type + "'");
}

inline Json report_to_json(const ShadowReport& r) {
    return Json{{"time", r.time},           {"plane", r.plane.label()}, {"area", r.area},
                {"bound", r.bound},         {"tolerance", r.tolerance}, {"satisfied", r.satisfied},
                {"method", to_string(r.method)}};
}

/// time,plane,area,bound,satisfied
inline std::string reports_to_csv(const std::vector<ShadowReport>& reports) {
    std::string out = "time,plane,area,bound,satisfied\n";
    for (const auto& r : reports)
        out += format_double(r.time) + "," + r.plane.label() + "," + format_double(r.area) + "," +
               format_double(r.bound) + "," + (r.satisfied ? "true" : "false") + "\n";
    return out;
}

inline Json entry_to_json(const SpectrumEntry& e) {
    Json out{{"n", e.quanta}, {"energy", e.energy}, {"actions", e.actions}, {"maslov", e.maslov}};
    if (!e.frequencies.empty()) out["frequencies"] = e.frequencies;
    return out;
}

inline Json spectrum_to_json(const SpectrumResult& s) {
    Json entries = Json::array();
    for (const auto& e : s.entries) entries.push_back(entry_to_json(e));
    return Json{{"hbar", s.hbar}, {"entries", entries}, {"notices", s.notices}};
}

/// n_1..n_N,E,action_1..action_N,maslov_1..maslov_N
inline std::string spectrum_to_csv(const SpectrumResult& s) {
    std::string out;
    const std::size_t dof = s.entries.empty() ? 1 : s.entries.front().quanta.size();
    for (std::size_t j = 1; j <= dof; ++j) out += "n" + std::to_string(j) + ",";
    out += "E";
    for (std::size_t j = 1; j <= dof; ++j) out += ",action" + std::to_string(j);
    for (std::size_t j = 1; j <= dof; ++j) out += ",maslov" + std::to_string(j);
    out += "\n";
    for (const auto& e : s.entries) {
        for (int n : e.quanta) out += std::to_string(n) + ",";
        out += format_double(e.energy);
        for (double a : e.actions) out += "," + format_double(a);
        for (int m : e.maslov) out += "," + std::to_string(m);
        out += "\n";
    }
    return out;
}

inline Json witness_to_json(const PlaneWitness& w) {
    return Json{{"member", w.member}, {"plane", w.plane.label()}, {"determinant", w.determinant}};
}

inline Json ensemble_to_json(const EnsembleSummary& s) {
    Json out{{"n", s.dof},
             {"count", s.count},
             {"sigma", s.sigma},
             {"seed", s.seed},
             {"min_conjugate_det", s.min_conjugate.determinant},
             {"min_conjugate_witness", witness_to_json(s.min_conjugate)},
             {"max_defect", s.max_defect},
             {"conjugate_bound_holds", s.conjugate_bound_holds}};
    if (s.min_nonconjugate) {
        out["min_nonconjugate_det"] = s.min_nonconjugate->determinant;
        out["min_nonconjugate_witness"] = witness_to_json(*s.min_nonconjugate);
    } else {
        out["min_nonconjugate_det"] = nullptr;
        out["min_nonconjugate_witness"] = nullptr;
    }
    return out;
}

inline Json loop_to_json(const LoopRecord& r) {
    return Json{{"nu", r.nu},
                {"action", r.action},
                {"maslov", r.maslov},
                {"ebk_value", r.ebk_value},
                {"ebk_integer", r.ebk_integer}};
}

/// Inline JSON text, or "@path" to read it from a file.
inline Json parse_json_argument(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw InvalidArgument("cannot open " + text.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace sympcap::io
