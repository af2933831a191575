#include "fracsing/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fracsing {

namespace {

std::string position_prefix(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
}

struct Token {
    std::string text;
    std::size_t column = 0;  // 1-based start column in the original line
};

Token trim_with_column(const std::string& line, std::size_t from, std::size_t to) {
    std::size_t a = from;
    while (a < to && std::isspace(static_cast<unsigned char>(line[a]))) {
        ++a;
    }
    std::size_t b = to;
    while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) {
        --b;
    }
    return Token{line.substr(a, b - a), a + 1};
}

double parse_double(const Token& v, std::size_t line_no, const std::string& key) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v.text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.text.size() || v.text.empty()) {
        throw ConfigError(line_no, v.column,
                          position_prefix(line_no, v.column) + "value for '" + key +
                              "' is not a number: '" + v.text + "'");
    }
    return x;
}

std::size_t parse_count(const Token& v, std::size_t line_no, const std::string& key) {
    if (v.text.empty() || v.text.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(line_no, v.column,
                          position_prefix(line_no, v.column) + "value for '" + key +
                              "' is not a nonnegative integer: '" + v.text + "'");
    }
    return static_cast<std::size_t>(std::stoull(v.text));
}

bool parse_bool(const Token& v, std::size_t line_no, const std::string& key) {
    if (v.text == "true") {
        return true;
    }
    if (v.text == "false") {
        return false;
    }
    throw ConfigError(line_no, v.column,
                      position_prefix(line_no, v.column) + "value for '" + key +
                          "' must be 'true' or 'false', got '" + v.text + "'");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(what), line_(line), column_(column) {}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const Token whole = trim_with_column(line, 0, line.size());
        if (whole.text.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_no, whole.column,
                              position_prefix(line_no, whole.column) +
                                  "expected 'key = value', got '" + whole.text + "'");
        }
        const Token key = trim_with_column(line, 0, eq);
        const Token value = trim_with_column(line, eq + 1, line.size());
        if (key.text.empty()) {
            throw ConfigError(line_no, whole.column,
                              position_prefix(line_no, whole.column) + "missing key before '='");
        }
        if (value.text.empty()) {
            throw ConfigError(line_no, eq + 2,
                              position_prefix(line_no, eq + 2) + "missing value for key '" +
                                  key.text + "'");
        }
        if (!seen.insert(key.text).second) {
            throw ConfigError(line_no, key.column,
                              position_prefix(line_no, key.column) + "duplicate key '" +
                                  key.text + "'");
        }

        const std::string& k = key.text;
        if (k == "domain") {
            if (value.text != "interval" && value.text != "rectangle") {
                throw ConfigError(line_no, value.column,
                                  position_prefix(line_no, value.column) +
                                      "domain must be 'interval' or 'rectangle', got '" +
                                      value.text + "'");
            }
            cfg.domain = value.text;
        } else if (k == "shift_policy") {
            if (value.text != "bracket_aware" && value.text != "fixed") {
                throw ConfigError(line_no, value.column,
                                  position_prefix(line_no, value.column) +
                                      "shift_policy must be 'bracket_aware' or 'fixed', got '" +
                                      value.text + "'");
            }
            cfg.shift_policy = value.text;
        } else if (k == "length") {
            cfg.length = parse_double(value, line_no, k);
        } else if (k == "length_x") {
            cfg.length_x = parse_double(value, line_no, k);
        } else if (k == "length_y") {
            cfg.length_y = parse_double(value, line_no, k);
        } else if (k == "nodes_per_axis") {
            cfg.nodes_per_axis = parse_count(value, line_no, k);
        } else if (k == "n_modes") {
            cfg.n_modes = parse_count(value, line_no, k);
        } else if (k == "s") {
            cfg.s = parse_double(value, line_no, k);
        } else if (k == "p") {
            cfg.p = parse_double(value, line_no, k);
        } else if (k == "eps") {
            cfg.eps = parse_double(value, line_no, k);
        } else if (k == "eps0") {
            cfg.eps0 = parse_double(value, line_no, k);
        } else if (k == "ratio") {
            cfg.ratio = parse_double(value, line_no, k);
        } else if (k == "steps") {
            cfg.steps = parse_count(value, line_no, k);
        } else if (k == "warm_start") {
            cfg.warm_start = parse_bool(value, line_no, k);
        } else if (k == "tol_inner") {
            cfg.tol_inner = parse_double(value, line_no, k);
        } else if (k == "max_iterations") {
            cfg.max_iterations = parse_count(value, line_no, k);
        } else if (k == "tol_pos") {
            cfg.tol_pos = parse_double(value, line_no, k);
        } else if (k == "test_modes") {
            cfg.test_modes = parse_count(value, line_no, k);
        } else if (k == "relaxation") {
            cfg.relaxation = parse_double(value, line_no, k);
        } else if (k == "limit_residual_tol") {
            cfg.limit_residual_tol = parse_double(value, line_no, k);
        } else if (k == "extension_intervals") {
            cfg.extension_intervals = parse_count(value, line_no, k);
        } else if (k == "extension_grading") {
            cfg.extension_grading = parse_double(value, line_no, k);
        } else if (k == "extension_adequacy") {
            cfg.extension_adequacy = parse_double(value, line_no, k);
        } else if (k == "flux_fit_nodes") {
            cfg.flux_fit_nodes = parse_count(value, line_no, k);
        } else if (k == "calibration_modes") {
            cfg.calibration_modes = parse_count(value, line_no, k);
        } else if (k == "probe_ratio") {
            cfg.probe_ratio = parse_double(value, line_no, k);
        } else if (k == "out_dir") {
            cfg.out_dir = value.text;
        } else {
            throw ConfigError(line_no, key.column,
                              position_prefix(line_no, key.column) + "unknown key '" + k + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = parse_config_text(buf.str());
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    require(cfg.s > 0.0 && cfg.s <= 1.0,
            "s must satisfy 0 < s <= 1, got " + fmt(cfg.s));
    require(cfg.p > 0.0 && cfg.p < 1.0,
            "p must satisfy 0 < p < 1, got " + fmt(cfg.p));
    require(cfg.length > 0.0, "length must be > 0, got " + fmt(cfg.length));
    require(cfg.length_x > 0.0, "length_x must be > 0, got " + fmt(cfg.length_x));
    require(cfg.length_y > 0.0, "length_y must be > 0, got " + fmt(cfg.length_y));
    require(cfg.nodes_per_axis >= 3,
            "nodes_per_axis must be >= 3, got " + std::to_string(cfg.nodes_per_axis));
    require(cfg.n_modes >= 1, "n_modes must be >= 1, got " + std::to_string(cfg.n_modes));
    if (cfg.domain == "interval") {
        // On an interval the highest axis index equals n_modes, so the basis
        // resolution bound can be stated right here.  Rectangles derive their
        // axis counts from the eigenvalue ordering; the basis build checks them.
        require(cfg.nodes_per_axis >= 4 * cfg.n_modes + 1,
                "nodes_per_axis must be >= 4 * n_modes + 1 = " +
                    std::to_string(4 * cfg.n_modes + 1) + ", got " +
                    std::to_string(cfg.nodes_per_axis));
    }
    require(cfg.eps > 0.0, "eps must be > 0, got " + fmt(cfg.eps));
    require(cfg.eps0 > 0.0 && cfg.eps0 < 1.0,
            "eps0 must lie in (0, 1), got " + fmt(cfg.eps0));
    require(cfg.ratio > 0.0 && cfg.ratio < 1.0,
            "ratio must lie in (0, 1), got " + fmt(cfg.ratio));
    require(cfg.steps >= 3, "steps must be >= 3, got " + std::to_string(cfg.steps));
    require(cfg.tol_inner > 0.0, "tol_inner must be > 0, got " + fmt(cfg.tol_inner));
    require(cfg.max_iterations >= 1,
            "max_iterations must be >= 1, got " + std::to_string(cfg.max_iterations));
    require(cfg.tol_pos > 0.0, "tol_pos must be > 0, got " + fmt(cfg.tol_pos));
    require(cfg.test_modes >= 1,
            "test_modes must be >= 1, got " + std::to_string(cfg.test_modes));
    require(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0,
            "relaxation must lie in (0, 1], got " + fmt(cfg.relaxation));
    require(cfg.limit_residual_tol > 0.0,
            "limit_residual_tol must be > 0, got " + fmt(cfg.limit_residual_tol));
    require(cfg.extension_intervals >= 8,
            "extension_intervals must be >= 8, got " + std::to_string(cfg.extension_intervals));
    require(cfg.extension_grading >= 1.0,
            "extension_grading must be >= 1, got " + fmt(cfg.extension_grading));
    require(cfg.extension_adequacy >= 8.0,
            "extension_adequacy must be >= 8, got " + fmt(cfg.extension_adequacy));
    require(cfg.flux_fit_nodes >= 2,
            "flux_fit_nodes must be >= 2, got " + std::to_string(cfg.flux_fit_nodes));
    require(cfg.calibration_modes >= 1,
            "calibration_modes must be >= 1, got " + std::to_string(cfg.calibration_modes));
    require(cfg.probe_ratio > 0.0 && cfg.probe_ratio < 1.0,
            "probe_ratio must lie in (0, 1), got " + fmt(cfg.probe_ratio));
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "domain = " << cfg.domain << '\n';
    out << "length = " << fmt(cfg.length) << '\n';
    out << "length_x = " << fmt(cfg.length_x) << '\n';
    out << "length_y = " << fmt(cfg.length_y) << '\n';
    out << "nodes_per_axis = " << cfg.nodes_per_axis << '\n';
    out << "n_modes = " << cfg.n_modes << '\n';
    out << "s = " << fmt(cfg.s) << '\n';
    out << "p = " << fmt(cfg.p) << '\n';
    out << "eps = " << fmt(cfg.eps) << '\n';
    out << "eps0 = " << fmt(cfg.eps0) << '\n';
    out << "ratio = " << fmt(cfg.ratio) << '\n';
    out << "steps = " << cfg.steps << '\n';
    out << "warm_start = " << (cfg.warm_start ? "true" : "false") << '\n';
    out << "tol_inner = " << fmt(cfg.tol_inner) << '\n';
    out << "max_iterations = " << cfg.max_iterations << '\n';
    out << "shift_policy = " << cfg.shift_policy << '\n';
    out << "tol_pos = " << fmt(cfg.tol_pos) << '\n';
    out << "test_modes = " << cfg.test_modes << '\n';
    out << "relaxation = " << fmt(cfg.relaxation) << '\n';
    out << "limit_residual_tol = " << fmt(cfg.limit_residual_tol) << '\n';
    out << "extension_intervals = " << cfg.extension_intervals << '\n';
    out << "extension_grading = " << fmt(cfg.extension_grading) << '\n';
    out << "extension_adequacy = " << fmt(cfg.extension_adequacy) << '\n';
    out << "flux_fit_nodes = " << cfg.flux_fit_nodes << '\n';
    out << "calibration_modes = " << cfg.calibration_modes << '\n';
    out << "probe_ratio = " << fmt(cfg.probe_ratio) << '\n';
    if (!cfg.out_dir.empty()) {  // the parser refuses empty values
        out << "out_dir = " << cfg.out_dir << '\n';
    }
    return out.str();
}

Domain domain_of(const RunConfig& cfg) {
    if (cfg.domain == "interval") {
        return make_interval(cfg.length);
    }
    return make_rectangle(cfg.length_x, cfg.length_y);
}

Grid grid_of(const RunConfig& cfg) {
    const Domain dom = domain_of(cfg);
    return make_grid(dom, std::vector<std::size_t>(dom.dim(), cfg.nodes_per_axis));
}

SolveOptions options_of(const RunConfig& cfg) {
    SolveOptions opt;
    opt.tol_inner = cfg.tol_inner;
    opt.max_iterations = cfg.max_iterations;
    opt.shift_policy =
        cfg.shift_policy == "fixed" ? ShiftPolicy::fixed : ShiftPolicy::bracket_aware;
    opt.tol_pos = cfg.tol_pos;
    opt.test_modes = cfg.test_modes;
    opt.relaxation = cfg.relaxation;
    return opt;
}

EpsSchedule schedule_of(const RunConfig& cfg) {
    EpsSchedule sched;
    sched.eps0 = cfg.eps0;
    sched.ratio = cfg.ratio;
    sched.steps = cfg.steps;
    return sched;
}

YGridSpec yspec_of(const RunConfig& cfg) {
    YGridSpec spec;
    spec.intervals = cfg.extension_intervals;
    spec.grading = cfg.extension_grading;
    spec.adequacy = cfg.extension_adequacy;
    return spec;
}

}  // namespace fracsing
