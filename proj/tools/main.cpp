#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fracsing/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"positive solutions of the singular fractional problem "
                 "(-Lap)^s u = u^(-p) on intervals and rectangles"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        bool needs_config;
    };
    const Sub subs[] = {
        {"basis-check", "eigenbasis orthonormality and quadrature diagnostics", true},
        {"solve-eps", "solve one regularized problem (-Lap)^s u = (eps+u)^(-p)", true},
        {"continue", "walk the eps schedule down and estimate the singular limit", true},
        {"validate-extension", "calibrate the cylinder-extension flux constant", true},
        {"uniqueness-probe", "compare two schedules and warm vs fresh starts", true},
        {"report", "verify the artifacts and certificates of an existing run", false},
    };

    std::string config_path;
    std::string out_dir;
    std::string chosen;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        if (s.needs_config) {
            sub->add_option("--config", config_path, "flat key = value configuration file")
                ->required()
                ->check(CLI::ExistingFile);
            sub->add_option("--out", out_dir, "run directory for the artifacts (refused if "
                                              "it already contains files)");
        } else {
            sub->add_option("--out", out_dir, "run directory to verify")->required();
        }
        sub->callback([&chosen, name = std::string(s.name)] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    // An empty --out falls back to the config's out_dir, then to
    // "run-<command>"; that resolution happens inside run_command where the
    // config has been loaded.
    fracsing::CommandArgs args;
    args.command = chosen;
    args.config_path = config_path;
    args.out_dir = out_dir;
    return fracsing::run_command(args, std::cout, std::cerr);
}
