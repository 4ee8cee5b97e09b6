#pragma once

#include <json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "neelxyz/errors.hpp"
#include "neelxyz/factor_core.hpp"
#include "neelxyz/lattice.hpp"
#include "neelxyz/verifier.hpp"

namespace neelxyz {

using json = nlohmann::ordered_json;

struct JobResult {
    json report;
    int exit_code = 0;  // 0 pass, 1 input error, 2 condition/verification failure
};

namespace jobdetail {

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline SpinQuantum parse_spin(const json& job) {
    if (job.contains("two_s")) {
        if (!job["two_s"].is_number_integer() || job["two_s"].get<int>() < 1) {
            throw BadInput("two_s must be a positive integer");
        }
        return SpinQuantum{job["two_s"].get<int>()};
    }
    if (!job.contains("s")) throw BadInput("missing spin: provide \"s\" or \"two_s\"");
    const json& s = job["s"];
    double value = 0.0;
    if (s.is_string()) {
        try {
            std::size_t pos = 0;
            value = std::stod(s.get<std::string>(), &pos);
            if (pos != s.get<std::string>().size()) throw BadInput("");
        } catch (...) {
            throw BadInput("cannot parse spin string \"" + s.get<std::string>() + "\"");
        }
    } else if (s.is_number()) {
        value = s.get<double>();
    } else {
        throw BadInput("spin must be a number or an exact decimal string");
    }
    const double doubled = 2.0 * value;
    if (doubled < 1.0 || doubled != std::floor(doubled)) {
        throw BadInput("spin must be a positive half-integer (0.5, 1, 1.5, ...)");
    }
    return SpinQuantum{static_cast<int>(doubled)};
}

inline ModelContext parse_context(const json& job) {
    if (!job.contains("d")) throw BadInput("missing dimension \"d\"");
    const int d = job["d"].get<int>();
    if (d < 1) throw BadInput("dimension d must be >= 1");
    return ModelContext{d, parse_spin(job)};
}

inline double need_number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw BadInput(std::string("missing or non-numeric field \"") + key + "\"");
    }
    return obj[key].get<double>();
}

inline Params parse_params(const json& job) {
    if (!job.contains("params")) throw BadInput("missing \"params\" object");
    const json& p = job["params"];
    return Params{need_number(p, "Jx"), need_number(p, "Jy"), need_number(p, "Jz"),
                  need_number(p, "hx"), need_number(p, "hy"), need_number(p, "hz")};
}

inline NeelAngles parse_angles(const json& job) {
    if (!job.contains("angles")) throw BadInput("missing \"angles\" object");
    const json& a = job["angles"];
    double scale = 1.0;
    if (a.contains("unit")) {
        const std::string unit = a["unit"].get<std::string>();
        if (unit == "deg") {
            scale = std::numbers::pi / 180.0;
        } else if (unit != "rad") {
            throw BadInput("angle unit must be \"rad\" or \"deg\"");
        }
    }
    return NeelAngles{
        Direction::canonical(scale * need_number(a, "theta1"), scale * need_number(a, "phi1")),
        Direction::canonical(scale * need_number(a, "theta2"), scale * need_number(a, "phi2"))};
}

inline Lattice parse_lattice(const json& job, const ModelContext& ctx) {
    if (!job.contains("extents")) throw BadInput("missing \"extents\" array");
    std::vector<int> ext = job["extents"].get<std::vector<int>>();
    if (static_cast<int>(ext.size()) != ctx.dim) {
        throw BadInput("extents must list exactly d lattice lengths");
    }
    try {
        return Lattice(ctx.dim, ext);
    } catch (const Error& e) {
        throw BadInput(e.what());
    }
}

inline Tolerances parse_tolerances(const json& job) {
    Tolerances tol;
    if (job.contains("tolerances")) {
        const json& t = job["tolerances"];
        if (t.contains("condition")) tol.condition = t["condition"].get<double>();
        if (t.contains("denominator")) tol.denominator = t["denominator"].get<double>();
        if (t.contains("nullspace")) tol.nullspace = t["nullspace"].get<double>();
    }
    return tol;
}

inline Vector6d parse_sweep_direction(const json& sweep) {
    if (!sweep.contains("direction")) throw BadInput("sweep needs a \"direction\"");
    const json& d = sweep["direction"];
    Vector6d v = Vector6d::Zero();
    if (d.is_array()) {
        if (d.size() != 6) throw BadInput("sweep direction array must have 6 components");
        for (int i = 0; i < 6; ++i) v(i) = d[i].get<double>();
        return v;
    }
    std::string name = d.get<std::string>();
    double sign = 1.0;
    if (!name.empty() && (name[0] == '+' || name[0] == '-')) {
        sign = name[0] == '-' ? -1.0 : 1.0;
        name = name.substr(1);
    }
    const std::vector<std::string> axes{"Jx", "Jy", "Jz", "hx", "hy", "hz"};
    for (int i = 0; i < 6; ++i) {
        if (name == axes[i]) {
            v(i) = sign;
            return v;
        }
    }
    throw BadInput("unknown sweep direction \"" + name + "\"");
}

inline json complex_to_json(const complexd& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

inline json angles_to_json(const NeelAngles& a) {
    return json{{"theta1", a.dir1.theta},
                {"phi1", a.dir1.phi},
                {"theta2", a.dir2.theta},
                {"phi2", a.dir2.phi}};
}

inline json params_to_json(const Params& p) {
    return json{{"Jx", p.jx}, {"Jy", p.jy}, {"Jz", p.jz},
                {"hx", p.hx}, {"hy", p.hy}, {"hz", p.hz}};
}

}  // namespace jobdetail

/// Runs one job described by a JSON object with a "command" field. Never
/// throws: every error becomes a report entry and a nonzero exit code.
inline JobResult run_job(const json& job) {
    using namespace jobdetail;
    json report;
    report["schema"] = 1;
    std::string command;
    try {
        if (!job.is_object() || !job.contains("command")) {
            throw BadInput("job must be a JSON object with a \"command\" field");
        }
        command = job["command"].get<std::string>();
        report["command"] = command;
        const Tolerances tol = parse_tolerances(job);

        if (command == "check") {
            const ModelContext ctx = parse_context(job);
            const Params p = parse_params(job);
            const double res = condition_residual(p, ctx, tol.denominator);
            const double f = ctx.field_scale();
            const bool pass = std::abs(res) <= tol.condition * f * f;
            report["params"] = params_to_json(p);
            report["residual"] = res;
            report["pass"] = pass;
            return {report, pass ? 0 : 2};
        }

        if (command == "angles") {
            const ModelContext ctx = parse_context(job);
            const Params p = parse_params(job);
            const AngleSolution sol = solve_angles_full(p, ctx, tol);
            report["angles"] = angles_to_json(sol.angles);
            report["z1"] = complex_to_json(sol.stereo.z1.at_infinity()
                                               ? complexd(std::numeric_limits<double>::infinity(), 0)
                                               : sol.stereo.z1.z());
            report["z2"] = complex_to_json(sol.stereo.z2.at_infinity()
                                               ? complexd(std::numeric_limits<double>::infinity(), 0)
                                               : sol.stereo.z2.z());
            if (std::abs(sol.quadratic.a) > 0.0) {
                report["alpha"] = complex_to_json(sol.root_product());
                report["beta"] = complex_to_json(sol.root_sum());
            }
            return {report, 0};
        }

        if (command == "params") {
            const ModelContext ctx = parse_context(job);
            const NeelAngles a = parse_angles(job);
            const ParamRay ray = solve_params(a, ctx, tol);
            report["nullspace_dim"] = ray.dim;
            json basis = json::array();
            for (int k = 0; k < ray.dim; ++k) {
                basis.push_back(params_to_json(Params::from_vec(ray.basis.col(k))));
            }
            report["basis"] = basis;
            if (ray.jx_one) {
                report["representative"] = params_to_json(Params::from_vec(*ray.jx_one));
                const Vector6d closed = closed_form_params(angle_invariants(a), ctx);
                if (closed.allFinite()) {
                    report["closed_form_delta"] = (*ray.jx_one - closed).cwiseAbs().maxCoeff();
                }
            }
            return {report, 0};
        }

        if (command == "verify") {
            const ModelContext ctx = parse_context(job);
            const Params p = parse_params(job);
            const Lattice lat = parse_lattice(job, ctx);
            const NeelAngles a = job.contains("angles") ? parse_angles(job) : solve_angles(p, ctx, tol);
            const StateVector neel = build_neel_state(lat, a, ctx.spin);
            const StateVector hv = apply_hamiltonian(p, lat, ctx.spin, neel);
            const double energy = lat.num_sites() * energy_per_site(p, ctx);
            const double eig_res = (hv - energy * neel).norm();
            const bool pass = eig_res <= 1e-10 * std::max(1.0, hv.norm());
            report["angles"] = angles_to_json(a);
            report["energy"] = energy;
            report["eigen_residual"] = eig_res;
            report["bond_residual"] = bond_residual(p, ctx, a);
            report["pass"] = pass;
            return {report, pass ? 0 : 2};
        }

        if (command == "sweep") {
            const ModelContext ctx = parse_context(job);
            const Params p0 = parse_params(job);
            if (!job.contains("sweep")) throw BadInput("missing \"sweep\" object");
            const json& sw = job["sweep"];
            const Vector6d dir = parse_sweep_direction(sw);
            if (!sw.contains("range") || !sw["range"].is_array() || sw["range"].size() != 2) {
                throw BadInput("sweep needs \"range\": [t_lo, t_hi]");
            }
            const double lo = sw["range"][0].get<double>();
            const double hi = sw["range"][1].get<double>();
            const int samples = sw.contains("samples") ? sw["samples"].get<int>() : 2001;
            const std::vector<double> roots =
                factorizing_field_scan(p0, dir, ctx, lo, hi, samples, tol.denominator);
            report["roots"] = roots;
            return {report, 0};
        }

        if (command == "spectrum") {
            const ModelContext ctx = parse_context(job);
            const Params p = parse_params(job);
            const Lattice lat = parse_lattice(job, ctx);
            const Eigen::VectorXd eig = spectrum_probe(p, lat, ctx.spin);
            report["eigenvalues"] = std::vector<double>(eig.data(), eig.data() + eig.size());
            report["neel_energy"] = lat.num_sites() * energy_per_site(p, ctx);
            return {report, 0};
        }

        throw BadInput("unknown command \"" + command + "\"");
    } catch (const BadInput& e) {
        report["error"] = "InputError";
        report["message"] = e.what();
        return {report, 1};
    } catch (const Error& e) {
        report["error"] = e.name();
        report["message"] = e.what();
        return {report, 2};
    }
}

}  // namespace neelxyz
