#pragma once

// Command-line front end.  `run` parses argv, dispatches to the library and
// writes JSON (or CSV) results; errors become {"error": ..., "message": ...}
// objects with exit code 2 (input validation) or 3 (numerical failure).

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sympcap/json_io.hpp"

namespace sympcap::cli {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline Json parse_scalar(const std::string& text) {
    if (text.find(',') != std::string::npos) {
        Json arr = Json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) arr.push_back(parse_scalar(item));
        return arr;
    }
    if (text == "true") return true;
    if (text == "false") return false;
    try {
        std::size_t used = 0;
        if (text.find_first_of(".eE") == std::string::npos && text.find("inf") == std::string::npos) {
            const long long v = std::stoll(text, &used);
            if (used == text.size()) return v;
        }
        const double d = std::stod(text, &used);
        if (used == text.size()) return d;
    } catch (const std::logic_error&) {
    }
    return text;
}

/// ["R=1", "N=3"] -> {"R": 1, "N": 3}; a leading bare word becomes `lead_key`.
inline Json key_values(const std::vector<std::string>& tokens, const char* lead_key = nullptr) {
    if (tokens.size() == 1 && !tokens[0].empty() && (tokens[0].front() == '{' || tokens[0].front() == '@'))
        return io::parse_json_argument(tokens[0]);
    Json out = Json::object();
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const auto& t = tokens[k];
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            if (k == 0 && lead_key) { out[lead_key] = t; continue; }
            throw InvalidArgument("expected key=value, got '" + t + "'");
        }
        out[t.substr(0, eq)] = parse_scalar(t.substr(eq + 1));
    }
    return out;
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InvalidArgument("cannot parse number '" + item + "'");
        }
    }
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double x : parse_list(text)) {
        if (x != static_cast<int>(x)) throw InvalidArgument("expected integers, got '" + text + "'");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

struct Options {
    double hbar = 1.0;
    std::uint64_t seed = 1;
    std::optional<double> tol;
    std::string format = "json";
    std::string out_path;

    // subcommand inputs
    std::vector<std::string> ball, cylinder, ellipsoid, bottle, potential, oscillator;
    std::string region, matrix, omegas, plane = "all", quanta, potentials, times = "1,2,5", dump, mode = "both";
    std::string capacity;
    double radius = 1.0, neck = 0.5, sigma = 1.0, dt = 1e-3, grid_cell = 0.02, energy = 1.0, mass = 1.0;
    int n = 2, count = 1000, nmax = 10, evolve_dof = 1, bottle_dof = 2;
    long long samples = 100000;
    bool random_matrix = false;
};

inline QuadraticHamiltonian hamiltonian_from(const Options& o) {
    if (!o.matrix.empty()) return QuadraticHamiltonian(io::matrix_from_json(io::parse_json_argument(o.matrix)));
    if (!o.omegas.empty()) return io::hamiltonian_from_json(Json{{"omegas", parse_list(o.omegas)}});
    if (!o.oscillator.empty()) return io::hamiltonian_from_json(Json{{"oscillator", key_values(o.oscillator)}});
    throw InvalidArgument("give the Hamiltonian with --matrix, --omegas or --oscillator");
}

inline Potential1D potential_from(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw InvalidArgument("--potential is required");
    return io::potential_from_json(key_values(tokens, "kind"));
}

class Output {
public:
    Output(const Options& o, std::ostream& fallback) : fallback_(fallback) {
        if (!o.out_path.empty()) {
            file_ = std::make_unique<std::ofstream>(o.out_path);
            if (!*file_) throw InvalidArgument("cannot write " + o.out_path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : fallback_; }

private:
    std::ostream& fallback_;
    std::unique_ptr<std::ofstream> file_;
};

inline void emit(const Options& o, std::ostream& out, const Json& j, const std::string& csv = {}) {
    Output sink(o, out);
    if (o.format == "csv") {
        if (csv.empty()) throw InvalidArgument("this subcommand has no CSV form");
        sink.stream() << csv;
    } else {
        sink.stream() << j.dump(2) << "\n";
    }
}

inline Json error_object(const std::string& name, const std::string& message, int code) {
    return Json{{"error", name}, {"message", message}, {"exit_code", code}};
}

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace detail;
    Options o;
    CLI::App app{"Symplectic capacities, nonsqueezing checks and EBK quantization", "sympcap"};
    app.require_subcommand(1, 1);
    app.add_option("--hbar", o.hbar, "reduced Planck constant")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--tol", o.tol, "tolerance override");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", o.out_path, "write results to this path");

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto hamiltonian_flags = [&](CLI::App* s) {
        s->add_option("--matrix", o.matrix, "matrix JSON {\"n\",\"matrix\"} or @file");
        s->add_option("--omegas", o.omegas, "normal-form frequencies, comma separated");
        s->add_option("--oscillator", o.oscillator, "N=.. m=.. omega=..");
    };

    auto* capacity = sub("capacity", "capacity of a ball, cylinder, ellipsoid or bottle");
    capacity->add_option("--ball", o.ball, "R=.. N=..");
    capacity->add_option("--cylinder", o.cylinder, "j=.. R=.. N=.. [plane=q1q2]");
    capacity->add_option("--ellipsoid", o.ellipsoid, "E=.. plus omegas=a,b or m=.. omega=.. N=..");
    capacity->add_option("--bottle", o.bottle, "R=.. r=.. [N=2]");
    capacity->add_option("--region", o.region, "region JSON or @file");

    auto* williamson_cmd = sub("williamson", "Williamson normal form of a positive definite matrix");
    hamiltonian_flags(williamson_cmd);

    auto* shadow = sub("shadow", "exact shadows of S(B(R)) on coordinate planes");
    shadow->add_option("--matrix", o.matrix, "symplectic matrix JSON or @file");
    shadow->add_flag("--random", o.random_matrix, "use random_symplectic(--n, --sigma, --seed)");
    shadow->add_option("--n", o.n, "degrees of freedom for --random");
    shadow->add_option("--sigma", o.sigma, "scale for --random")->check(CLI::PositiveNumber);
    shadow->add_option("--R", o.radius, "ball radius")->check(CLI::PositiveNumber);
    shadow->add_option("--plane", o.plane, "plane label (q1p1, q1q2, p1p2, q1p2) or all");

    auto* ensemble = sub("nonsqueeze-ensemble", "conjugate and nonconjugate shadow determinants over random maps");
    ensemble->add_option("--n", o.n, "degrees of freedom");
    ensemble->add_option("--count", o.count, "ensemble size");
    ensemble->add_option("--sigma", o.sigma, "generator scale")->check(CLI::PositiveNumber);

    auto* evolve = sub("evolve", "grid-estimated shadows of a ball under a separable flow");
    evolve->add_option("--potential", o.potential, "kind [key=value ...] applied to every coordinate");
    evolve->add_option("--n", o.evolve_dof, "degrees of freedom");
    evolve->add_option("--R", o.radius, "ball radius")->check(CLI::PositiveNumber);
    evolve->add_option("--samples", o.samples, "number of advected points");
    evolve->add_option("--grid-cell", o.grid_cell, "raster cell side")->check(CLI::PositiveNumber);
    evolve->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
    evolve->add_option("--times", o.times, "snapshot times, comma separated");
    evolve->add_option("--plane", o.plane, "plane label");
    evolve->add_option("--dump", o.dump, "write projected point clouds (CSV: time,x,y) here");

    auto* q1d = sub("quantize-1d", "EBK levels of a one-dimensional potential");
    q1d->add_option("--potential", o.potential, "kind [key=value ...] or JSON");
    q1d->add_option("--nmax", o.nmax, "highest level");

    auto* qquad = sub("quantize-quadratic", "oscillator levels from symplectic eigenvalues");
    hamiltonian_flags(qquad);
    qquad->add_option("--quanta", o.quanta, "quantum numbers, ascending-frequency order");
    qquad->add_option("--nmax", o.nmax, "enumerate all quanta with entries <= nmax (when --quanta absent)");

    auto* qsep = sub("quantize-separable", "EBK level of a sum of one-dimensional systems");
    qsep->add_option("--potentials", o.potentials, "JSON array of potentials or @file")->required();
    qsep->add_option("--quanta", o.quanta, "quantum numbers")->required();

    auto* dos = sub("dos", "density of states of a quadratic Hamiltonian");
    hamiltonian_flags(dos);
    dos->add_option("--E", o.energy, "energy")->check(CLI::PositiveNumber);
    dos->add_option("--mode", o.mode, "analytic, numerical or both")
        ->check(CLI::IsMember({"analytic", "numerical", "both"}));

    auto* blob = sub("blob-check", "is a capacity (n + 1/2) h?");
    blob->add_option("--capacity", o.capacity, "capacity value or inf")->required();

    auto* bottle = sub("bottle-demo", "the nonconvex ball-plus-neck counterexample");
    bottle->add_option("--R", o.radius, "body radius")->check(CLI::PositiveNumber);
    bottle->add_option("--r", o.neck, "neck radius")->check(CLI::PositiveNumber);
    bottle->add_option("--n", o.bottle_dof, "degrees of freedom (>= 2)");
    bottle->add_option("--samples", o.samples, "certificate samples per inclusion");

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << app.help() << "\n" << e.what() << "\n";
        out << error_object("UsageError", e.what(), kExitValidation).dump(2) << "\n";
        return kExitValidation;
    }

    try {
        if (*capacity) {
            Json region;
            if (!o.region.empty()) region = io::parse_json_argument(o.region);
            else if (!o.ball.empty()) { region = key_values(o.ball); region["type"] = "ball"; }
            else if (!o.cylinder.empty()) { region = key_values(o.cylinder); region["type"] = "cylinder"; }
            else if (!o.bottle.empty()) { region = key_values(o.bottle); region["type"] = "bottle"; }
            else if (!o.ellipsoid.empty()) {
                Json kv = key_values(o.ellipsoid);
                Json h;
                if (kv.contains("omegas")) {
                    h["omegas"] = kv["omegas"].is_array() ? kv["omegas"] : Json::array({kv["omegas"]});
                } else {
                    h["oscillator"] = Json{{"N", kv.value("N", 1)}, {"m", io::number_or(kv, "m", 1.0)},
                                           {"omega", io::number(kv, "omega")}};
                }
                region = Json{{"type", "ellipsoid"}, {"hamiltonian", h}, {"E", io::number(kv, "E")}};
            } else {
                throw InvalidArgument("give one of --ball, --cylinder, --ellipsoid, --bottle or --region");
            }
            emit(o, out, io::capacity_to_json(io::capacity_of_region(region)));
        } else if (*williamson_cmd) {
            const auto wd = williamson(hamiltonian_from(o));
            Json j{{"n", wd.dof()},
                   {"omegas", std::vector<double>(wd.omegas.data(), wd.omegas.data() + wd.omegas.size())},
                   {"S", io::matrix_to_json(wd.S.matrix())},
                   {"residual", wd.residual}};
            emit(o, out, j);
        } else if (*shadow) {
            const auto s = o.random_matrix ? random_symplectic(o.n, o.sigma, o.seed)
                           : !o.matrix.empty()
                               ? SymplecticMatrix::certify(io::matrix_from_json(io::parse_json_argument(o.matrix)),
                                                           o.tol.value_or(kDefaultSymplecticTol))
                               : throw InvalidArgument("give --matrix or --random");
            std::vector<PlaneSelector> planes;
            if (o.plane == "all") {
                planes = conjugate_planes(s.dof());
                const auto rest = nonconjugate_planes(s.dof());
                planes.insert(planes.end(), rest.begin(), rest.end());
            } else {
                planes.push_back(PlaneSelector::parse(o.plane));
            }
            std::vector<ShadowReport> reports;
            Json arr = Json::array();
            for (const auto& pl : planes) {
                reports.push_back(linear_shadow_area(s, o.radius, pl));
                arr.push_back(io::report_to_json(reports.back()));
            }
            emit(o, out, Json{{"reports", arr}}, io::reports_to_csv(reports));
        } else if (*ensemble) {
            emit(o, out, io::ensemble_to_json(nonsqueeze_ensemble(o.n, o.count, o.sigma, o.seed)));
        } else if (*evolve) {
            const auto pot = o.potential.empty() ? quartic_potential() : potential_from(o.potential);
            const auto flow = separable_flow(pot, o.evolve_dof, o.dt);
            const auto plane = PlaneSelector::parse(o.plane == "all" ? "q1p1" : o.plane);
            std::vector<ProjectedCloud> clouds;
            EvolveOptions eo;
            eo.seed = o.seed;
            if (!o.dump.empty()) eo.clouds = &clouds;
            const auto reports = evolve_ball_shadow(Ball::centered(o.evolve_dof, o.radius), flow, plane, o.samples,
                                                    o.grid_cell, parse_list(o.times), eo);
            if (!o.dump.empty()) {
                std::ofstream dump(o.dump);
                if (!dump) throw InvalidArgument("cannot write " + o.dump);
                dump << "time,x,y\n";
                for (const auto& c : clouds)
                    for (std::size_t k = 0; k < c.x.size(); ++k)
                        dump << io::format_double(c.time) << "," << io::format_double(c.x[k]) << ","
                             << io::format_double(c.y[k]) << "\n";
            }
            Json arr = Json::array();
            for (const auto& r : reports) arr.push_back(io::report_to_json(r));
            emit(o, out, Json{{"reports", arr}}, io::reports_to_csv(reports));
        } else if (*q1d) {
            const auto result = spectrum_1d(potential_from(o.potential), o.nmax, PlanckConfig(o.hbar));
            emit(o, out, io::spectrum_to_json(result), io::spectrum_to_csv(result));
        } else if (*qquad) {
            const auto ham = hamiltonian_from(o);
            const PlanckConfig cfg(o.hbar);
            SpectrumResult result;
            result.hbar = o.hbar;
            if (!o.quanta.empty()) {
                result.entries.push_back(quantize_quadratic(ham, parse_int_list(o.quanta), cfg));
            } else {
                if (o.nmax < 0) throw InvalidArgument("--nmax must be nonnegative");
                std::vector<int> n(static_cast<std::size_t>(ham.dof()), 0);
                for (;;) {
                    result.entries.push_back(quantize_quadratic(ham, n, cfg));
                    std::size_t k = n.size();
                    while (k > 0 && n[k - 1] == o.nmax) n[--k] = 0;
                    if (k == 0) break;
                    ++n[k - 1];
                }
            }
            emit(o, out, io::spectrum_to_json(result), io::spectrum_to_csv(result));
        } else if (*qsep) {
            const Json arr = io::parse_json_argument(o.potentials);
            if (!arr.is_array()) throw InvalidArgument("--potentials must be a JSON array");
            std::vector<Potential1D> pots;
            for (const auto& p : arr) pots.push_back(io::potential_from_json(p));
            SpectrumResult result;
            result.hbar = o.hbar;
            result.entries.push_back(spectrum_separable(pots, parse_int_list(o.quanta), PlanckConfig(o.hbar)));
            emit(o, out, io::spectrum_to_json(result), io::spectrum_to_csv(result));
        } else if (*dos) {
            const auto ham = hamiltonian_from(o);
            const PlanckConfig cfg(o.hbar);
            Json j{{"E", o.energy}, {"hbar", o.hbar}, {"n", ham.dof()}};
            if (o.mode != "numerical") j["analytic"] = density_of_states(ham, o.energy, cfg);
            if (o.mode != "analytic") j["numerical"] = density_of_states_numerical(ham, o.energy, cfg);
            emit(o, out, j);
        } else if (*blob) {
            const PlanckConfig cfg(o.hbar);
            const auto cap = o.capacity == "inf" ? CapacityValue::infinity()
                                                 : CapacityValue::finite(parse_list(o.capacity).at(0), true);
            const auto n = blob_check(cap, cfg, o.tol.value_or(1e-8));
            Json j{{"capacity", cap.value()}, {"h", cfg.h()}, {"hbar", cfg.hbar}};
            j["n"] = n ? Json(*n) : Json(nullptr);
            emit(o, out, j);
        } else if (*bottle) {
            if (o.samples > 1000000) throw InvalidArgument("--samples is capped at 1e6 for the certificate");
            const auto fx = bordeaux_bottle_fixture(o.radius, o.neck, o.bottle_dof, static_cast<int>(o.samples));
            const double numeric = closed_loop_action(fx.bottle.neck_loop());
            Json j{{"R", o.radius},
                   {"r", o.neck},
                   {"n", o.bottle_dof},
                   {"capacity", io::capacity_to_json(fx.capacity)},
                   {"neck_loop_action", fx.neck_loop_action},
                   {"neck_loop_action_polygon", numeric},
                   {"strict_inequality", fx.neck_loop_action < fx.capacity.value()},
                   {"inner_points_checked", fx.report.inner_points_checked},
                   {"outer_points_checked", fx.report.outer_points_checked}};
            emit(o, out, j);
        }
        return kExitOk;
    } catch (const CertificateInvalid& e) {
        Json j = error_object(e.name(), e.what(), kExitNumerical);
        j["witness"] = e.witness();
        out << j.dump(2) << "\n";
        return kExitNumerical;
    } catch (const FlowDiverged& e) {
        Json j = error_object(e.name(), e.what(), kExitNumerical);
        j["time"] = e.time();
        out << j.dump(2) << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        const int code = e.category() == ErrorCategory::validation ? kExitValidation : kExitNumerical;
        out << error_object(e.name(), e.what(), code).dump(2) << "\n";
        return code;
    } catch (const nlohmann::json::exception& e) {
        out << error_object("InvalidArgument", e.what(), kExitValidation).dump(2) << "\n";
        return kExitValidation;
    }
}

}  // namespace sympcap::cli
