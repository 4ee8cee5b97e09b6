// Command-line front end: assembles a JSON job from a file and/or inline
// flags, runs it, and prints the report to stdout.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "neelxyz/job_runner.hpp"

namespace {

using neelxyz::json;

struct InlineOptions {
    std::optional<double> jx, jy, jz, hx, hy, hz;
    std::optional<double> theta1, phi1, theta2, phi2;
    std::optional<int> d;
    std::optional<std::string> s;
    std::vector<int> extents;
    std::optional<std::string> unit;
    std::optional<std::string> sweep_direction;
    std::vector<double> sweep_range;
    std::optional<int> sweep_samples;
    std::optional<std::string> job_file;
};

void add_common_flags(CLI::App* cmd, InlineOptions& o) {
    cmd->add_option("--job", o.job_file, "JSON job file; inline flags override its fields");
    cmd->add_option("--Jx", o.jx);
    cmd->add_option("--Jy", o.jy);
    cmd->add_option("--Jz", o.jz);
    cmd->add_option("--hx", o.hx);
    cmd->add_option("--hy", o.hy);
    cmd->add_option("--hz", o.hz);
    cmd->add_option("--theta1", o.theta1);
    cmd->add_option("--phi1", o.phi1);
    cmd->add_option("--theta2", o.theta2);
    cmd->add_option("--phi2", o.phi2);
    cmd->add_option("--unit", o.unit, "angle unit: rad (default) or deg");
    cmd->add_option("--d", o.d, "lattice dimension");
    cmd->add_option("--s", o.s, "spin as an exact half-integer, e.g. 0.5 or 1.5");
    cmd->add_option("--extents", o.extents, "lattice extents, one per dimension");
    cmd->add_option("--direction", o.sweep_direction, "sweep axis, e.g. +hz, or leave to the job file");
    cmd->add_option("--range", o.sweep_range, "sweep range t_lo t_hi")->expected(2);
    cmd->add_option("--samples", o.sweep_samples, "sweep sample count");
}

json build_job(const std::string& command, const InlineOptions& o) {
    json job;
    if (o.job_file) {
        std::ifstream in(*o.job_file);
        if (!in) throw std::runtime_error("cannot open job file " + *o.job_file);
        job = json::parse(in);
    }
    job["command"] = command;
    if (o.d) job["d"] = *o.d;
    if (o.s) job["s"] = *o.s;
    if (!o.extents.empty()) job["extents"] = o.extents;

    auto set_param = [&](const char* key, const std::optional<double>& v) {
        if (v) job["params"][key] = *v;
    };
    set_param("Jx", o.jx);
    set_param("Jy", o.jy);
    set_param("Jz", o.jz);
    set_param("hx", o.hx);
    set_param("hy", o.hy);
    set_param("hz", o.hz);

    auto set_angle = [&](const char* key, const std::optional<double>& v) {
        if (v) job["angles"][key] = *v;
    };
    set_angle("theta1", o.theta1);
    set_angle("phi1", o.phi1);
    set_angle("theta2", o.theta2);
    set_angle("phi2", o.phi2);
    if (o.unit) job["angles"]["unit"] = *o.unit;

    if (o.sweep_direction) job["sweep"]["direction"] = *o.sweep_direction;
    if (o.sweep_range.size() == 2) job["sweep"]["range"] = o.sweep_range;
    if (o.sweep_samples) job["sweep"]["samples"] = *o.sweep_samples;
    return job;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neel-type factorized eigenstates of the XYZ Heisenberg model: "
                 "condition checks, angle/parameter solvers and exact verification"};
    app.require_subcommand(1);

    InlineOptions opts;
    const std::vector<std::string> commands{"check", "angles", "params", "verify", "sweep", "spectrum"};
    for (const std::string& c : commands) {
        CLI::App* sub = app.add_subcommand(c);
        add_common_flags(sub, opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    json job;
    try {
        job = build_job(app.get_subcommands().front()->get_name(), opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const neelxyz::JobResult result = neelxyz::run_job(job);
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
}
