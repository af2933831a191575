#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracsing/config.hpp"
#include "fracsing/continuation.hpp"
#include "fracsing/extension.hpp"
#include "fracsing/field.hpp"
#include "fracsing/geometry.hpp"
#include "fracsing/monotone.hpp"

namespace fracsing {

/// %.17g -- round-trips every double and is what all CSV artifacts use.
std::string format_double(double x);

/// Create the run directory (parents included).  An existing, non-empty
/// directory is refused with std::runtime_error so runs never clobber each
/// other; an existing empty directory is fine.
void prepare_run_dir(const std::string& out_dir);

/// Nodal solution values: header "x,u" (interval) or "x,y,u" (rectangle),
/// one row per grid node in flat node order, LF line endings.
void write_solution_csv(const std::string& path, const GridField& u);

/// One row per continuation step with the certificates and margins.
void write_trace_csv(const std::string& path, const ContinuationReport& rep);

// JSON building blocks (ordered so serialization is deterministic).
nlohmann::ordered_json config_json(const RunConfig& cfg);
nlohmann::ordered_json bracket_json(const BracketReport& rep);
nlohmann::ordered_json solve_json(const SolveReport& rep);
nlohmann::ordered_json step_json(const StepRecord& rec);
nlohmann::ordered_json continuation_json(const ContinuationReport& rep);
nlohmann::ordered_json limit_json(const LimitEstimate& le);
nlohmann::ordered_json calibration_json(const CalibrationResult& cr, double reference);
nlohmann::ordered_json probe_json(const ProbeResult& pr);

void write_json(const std::string& path, const nlohmann::ordered_json& j);
nlohmann::ordered_json read_json(const std::string& path);

/// FNV-1a 64-bit over the file bytes; hex is 16 lowercase digits.
std::uint64_t fnv1a64_file(const std::string& path);
std::string fnv1a64_hex(std::uint64_t h);

/// manifest.json: name, size and FNV-1a 64 hash of every artifact in the run
/// directory (the manifest itself excluded).  Written last.
void write_manifest(const std::string& dir, const std::vector<std::string>& files);

/// Recompute the hashes recorded in dir/manifest.json.  Returns the name of
/// the first mismatching or missing file, or an empty string when everything
/// checks out.
std::string verify_manifest(const std::string& dir);

}  // namespace fracsing
