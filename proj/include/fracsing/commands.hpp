#pragma once

#include <iosfwd>
#include <string>

namespace fracsing {

/// Parsed command line: which subcommand, where the config lives, where the
/// artifacts go (for `report`: which run directory to verify).
struct CommandArgs {
    std::string command;
    std::string config_path;
    std::string out_dir;
};

/// Dispatch one subcommand.  Every artifact-producing command writes
/// report.json (config echo, results, certificates) plus its data files and
/// a manifest with FNV-1a 64 hashes, then prints a one-line summary; when a
/// certificate fails, the summary is a machine-readable JSON record naming
/// the first failed certificate.  Returns the process exit code: 0 when all
/// certificates pass, 1 otherwise.  Configuration and usage problems throw.
int run_command(const CommandArgs& args, std::ostream& out, std::ostream& err);

}  // namespace fracsing
