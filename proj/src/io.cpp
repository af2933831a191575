#include "fracsing/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracsing {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void prepare_run_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) {
            throw std::runtime_error("output path exists and is not a directory: " + out_dir);
        }
        if (fs::directory_iterator(dir) != fs::directory_iterator()) {
            throw std::runtime_error("refusing to overwrite non-empty run directory: " + out_dir);
        }
        return;
    }
    fs::create_directories(dir);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    return out;
}

}  // namespace

void write_solution_csv(const std::string& path, const GridField& u) {
    if (u.grid == nullptr) {
        if (!u.values.empty()) {
            throw std::invalid_argument("solution field has values but no grid");
        }
        open_out(path) << "x,u\n";  // empty field: header only
        return;
    }
    const Grid& grid = *u.grid;
    std::ofstream out = open_out(path);
    out << (grid.axes.size() == 1 ? "x,u" : "x,y,u") << '\n';
    for (std::size_t m = 0; m < grid.total_nodes(); ++m) {
        const std::vector<double> x = grid.coords(m);
        for (double xi : x) {
            out << format_double(xi) << ',';
        }
        out << format_double(u.values[m]) << '\n';
    }
}

void write_trace_csv(const std::string& path, const ContinuationReport& rep) {
    std::ofstream out = open_out(path);
    out << "step,eps,warm_used,fresh_restart,iterations_ascending,iterations_descending,"
           "gap,energy_defect_rel,sup_norm,min_interior,increment,envelope,"
           "ord_grow_margin,ord_shift_margin,ordering_ok\n";
    for (std::size_t k = 0; k < rep.steps.size(); ++k) {
        const StepRecord& r = rep.steps[k];
        out << k << ',' << format_double(r.eps) << ',' << (r.warm_used ? 1 : 0) << ','
            << (r.fresh_restart ? 1 : 0) << ',' << r.solve.bracket.iterations_ascending << ','
            << r.solve.bracket.iterations_descending << ','
            << format_double(r.solve.bracket.gap) << ','
            << format_double(r.solve.bracket.energy_defect_rel) << ','
            << format_double(r.sup_norm) << ',' << format_double(r.min_interior) << ','
            << format_double(r.increment) << ',' << format_double(r.envelope) << ','
            << format_double(r.ord_grow_margin) << ',' << format_double(r.ord_shift_margin)
            << ',' << (r.ordering_ok ? 1 : 0) << '\n';
    }
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["domain"] = cfg.domain;
    j["length"] = cfg.length;
    j["length_x"] = cfg.length_x;
    j["length_y"] = cfg.length_y;
    j["nodes_per_axis"] = cfg.nodes_per_axis;
    j["n_modes"] = cfg.n_modes;
    j["s"] = cfg.s;
    j["p"] = cfg.p;
    j["eps"] = cfg.eps;
    j["eps0"] = cfg.eps0;
    j["ratio"] = cfg.ratio;
    j["steps"] = cfg.steps;
    j["warm_start"] = cfg.warm_start;
    j["tol_inner"] = cfg.tol_inner;
    j["max_iterations"] = cfg.max_iterations;
    j["shift_policy"] = cfg.shift_policy;
    j["tol_pos"] = cfg.tol_pos;
    j["test_modes"] = cfg.test_modes;
    j["relaxation"] = cfg.relaxation;
    j["limit_residual_tol"] = cfg.limit_residual_tol;
    j["extension_intervals"] = cfg.extension_intervals;
    j["extension_grading"] = cfg.extension_grading;
    j["extension_adequacy"] = cfg.extension_adequacy;
    j["flux_fit_nodes"] = cfg.flux_fit_nodes;
    j["calibration_modes"] = cfg.calibration_modes;
    j["probe_ratio"] = cfg.probe_ratio;
    j["out_dir"] = cfg.out_dir;
    return j;
}

ordered_json bracket_json(const BracketReport& rep) {
    ordered_json j;
    j["converged"] = rep.converged;
    j["gap"] = rep.gap;
    j["iterations_ascending"] = rep.iterations_ascending;
    j["iterations_descending"] = rep.iterations_descending;
    ordered_json ord;
    ord["worst_ascending_step"] = rep.worst_ascending_step;
    ord["worst_descending_step"] = rep.worst_descending_step;
    ord["worst_confinement_low"] = rep.worst_confinement_low;
    ord["worst_confinement_high"] = rep.worst_confinement_high;
    ord["worst_cross_order"] = rep.worst_cross_order;
    ord["scale"] = rep.ordering_scale;
    ord["ok"] = rep.ordering_ok;
    ord["discretization_failure"] = rep.discretization_failure;
    j["ordering"] = ord;
    ordered_json energy;
    energy["lhs"] = rep.energy_lhs;
    energy["rhs"] = rep.energy_rhs;
    energy["defect_rel"] = rep.energy_defect_rel;
    j["energy"] = energy;
    j["final_mu"] = rep.final_mu;
    j["max_weak_residual"] = rep.max_weak_residual;
    j["message"] = rep.message;
    return j;
}

ordered_json solve_json(const SolveReport& rep) {
    ordered_json j;
    j["eps"] = rep.eps;
    j["s"] = rep.s;
    j["p"] = rep.p;
    j["warm_started"] = rep.warm_started;
    j["sup_norm"] = rep.sup_norm_solution;
    j["min_interior"] = rep.min_interior_solution;
    j["bracket"] = bracket_json(rep.bracket);
    return j;
}

ordered_json step_json(const StepRecord& rec) {
    ordered_json j;
    j["eps"] = rec.eps;
    j["warm_used"] = rec.warm_used;
    j["fresh_restart"] = rec.fresh_restart;
    j["converged"] = rec.solve.bracket.converged;
    j["gap"] = rec.solve.bracket.gap;
    j["iterations_ascending"] = rec.solve.bracket.iterations_ascending;
    j["iterations_descending"] = rec.solve.bracket.iterations_descending;
    j["sup_norm"] = rec.sup_norm;
    j["min_interior"] = rec.min_interior;
    j["increment"] = rec.increment;
    j["envelope"] = rec.envelope;
    j["ord_grow_margin"] = rec.ord_grow_margin;
    j["ord_shift_margin"] = rec.ord_shift_margin;
    j["ordering_ok"] = rec.ordering_ok;
    ordered_json energy;
    energy["lhs"] = rec.energy_lhs;
    energy["mid"] = rec.energy_mid;
    energy["bound_eps"] = rec.bound_eps;
    energy["bound_one"] = rec.bound_one;
    j["energy_chain"] = energy;
    return j;
}

ordered_json continuation_json(const ContinuationReport& rep) {
    ordered_json j;
    ordered_json sched;
    sched["eps0"] = rep.schedule.eps0;
    sched["ratio"] = rep.schedule.ratio;
    sched["steps"] = rep.schedule.steps;
    sched["eps_end"] = rep.schedule.last();
    j["schedule"] = sched;
    j["s"] = rep.exps.s;
    j["p"] = rep.exps.p;
    j["completed"] = rep.completed;
    j["all_certified"] = rep.all_certified;
    j["message"] = rep.message;
    ordered_json steps = ordered_json::array();
    for (const StepRecord& r : rep.steps) {
        steps.push_back(step_json(r));
    }
    j["steps"] = steps;
    return j;
}

ordered_json limit_json(const LimitEstimate& le) {
    ordered_json j;
    j["tail_bound"] = le.tail_bound;
    j["sup_norm"] = le.sup_norm;
    j["min_interior"] = le.min_interior;
    j["interior_positive"] = le.interior_positive;
    j["max_weak_residual"] = le.max_weak_residual;
    j["weak_residual"] = le.weak_residual;
    j["increments_within_envelope"] = le.increments_within_envelope;
    j["increments_nonincreasing"] = le.increments_nonincreasing;
    j["sup_trace_nondecreasing"] = le.sup_trace_nondecreasing;
    j["sup_trace_bounded"] = le.sup_trace_bounded;
    return j;
}

ordered_json calibration_json(const CalibrationResult& cr, double reference) {
    ordered_json j;
    j["c_s"] = cr.c_s;
    j["spread"] = cr.spread;
    j["per_mode"] = cr.per_mode;
    j["extraction_ok"] = cr.extraction_ok;
    j["pass"] = cr.pass;
    j["reference"] = reference;
    j["reference_gap_rel"] =
        reference != 0.0 ? std::abs(cr.c_s - reference) / std::abs(reference) : 0.0;
    return j;
}

ordered_json probe_json(const ProbeResult& pr) {
    ordered_json j;
    j["sup_difference"] = pr.sup_difference;
    j["eps_end"] = pr.eps_end;
    j["threshold"] = pr.threshold;
    j["pass"] = pr.pass;
    return j;
}

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

ordered_json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file for reading: " + path);
    }
    ordered_json j;
    in >> j;
    return j;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot hash missing file: " + path);
    }
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string fnv1a64_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files) {
    ordered_json entries = ordered_json::array();
    for (const std::string& name : files) {
        const fs::path p = fs::path(dir) / name;
        ordered_json e;
        e["name"] = name;
        e["bytes"] = static_cast<std::uint64_t>(fs::file_size(p));
        e["fnv1a64"] = fnv1a64_hex(fnv1a64_file(p.string()));
        entries.push_back(e);
    }
    ordered_json j;
    j["files"] = entries;
    write_json((fs::path(dir) / "manifest.json").string(), j);
}

std::string verify_manifest(const std::string& dir) {
    const fs::path mpath = fs::path(dir) / "manifest.json";
    if (!fs::exists(mpath)) {
        return "manifest.json";
    }
    const ordered_json j = read_json(mpath.string());
    if (!j.contains("files") || !j["files"].is_array()) {
        return "manifest.json";
    }
    for (const auto& e : j["files"]) {
        const std::string name = e.at("name").get<std::string>();
        const fs::path p = fs::path(dir) / name;
        if (!fs::exists(p)) {
            return name;
        }
        if (fs::file_size(p) != e.at("bytes").get<std::uint64_t>()) {
            return name;
        }
        if (fnv1a64_hex(fnv1a64_file(p.string())) != e.at("fnv1a64").get<std::string>()) {
            return name;
        }
    }
    return std::string();
}

}  // namespace fracsing
