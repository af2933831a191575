#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "fracsing/continuation.hpp"
#include "fracsing/extension.hpp"
#include "fracsing/geometry.hpp"
#include "fracsing/monotone.hpp"

namespace fracsing {

/// Parse failure with the offending position; line and column are 1-based.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::size_t column, const std::string& what);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Everything a run needs, read from a flat `key = value` file.  Lines may
/// carry `#` comments; unknown or duplicate keys are rejected with their
/// position.  Defaults describe the standard interval run.
struct RunConfig {
    // domain
    std::string domain = "interval";  // "interval" or "rectangle"
    double length = 3.14159265358979323846;    // interval
    double length_x = 3.14159265358979323846;  // rectangle
    double length_y = 3.14159265358979323846;

    // discretization
    std::size_t nodes_per_axis = 1025;
    std::size_t n_modes = 256;

    // operator and nonlinearity
    double s = 0.5;
    double p = 0.5;

    // single regularized solve
    double eps = 0.5;

    // continuation schedule
    double eps0 = 0.5;
    double ratio = 0.5;
    std::size_t steps = 14;
    bool warm_start = true;

    // iteration controls
    double tol_inner = 1e-10;
    std::size_t max_iterations = 200000;
    std::string shift_policy = "bracket_aware";  // or "fixed"
    double tol_pos = 1e-8;
    std::size_t test_modes = 10;
    double relaxation = 1.0;

    // certificate threshold for the limit's weak residual (continue runs)
    double limit_residual_tol = 1e-3;

    // extension validator
    std::size_t extension_intervals = 400;
    double extension_grading = 3.0;
    double extension_adequacy = 10.0;
    std::size_t flux_fit_nodes = 6;
    std::size_t calibration_modes = 5;

    // uniqueness probe
    double probe_ratio = 0.4;

    // default artifact directory; the command line's --out overrides it and
    // an empty value falls back to "run-<command>"
    std::string out_dir;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Validation names the field and the violated bound.
void validate_config(const RunConfig& cfg);

/// Serialize so that parse_config_text(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

// Adapters into the numerical layers.
Domain domain_of(const RunConfig& cfg);
Grid grid_of(const RunConfig& cfg);
SolveOptions options_of(const RunConfig& cfg);
EpsSchedule schedule_of(const RunConfig& cfg);
YGridSpec yspec_of(const RunConfig& cfg);

}  // namespace fracsing
