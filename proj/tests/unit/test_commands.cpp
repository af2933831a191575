#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fracsing/commands.hpp"
#include "fracsing/io.hpp"

using namespace fracsing;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path root;
    Sandbox() {
        root = fs::temp_directory_path() /
               ("fracsing-cmd-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(root);
    }
    ~Sandbox() { fs::remove_all(root); }

    std::string config(const std::string& text) const {
        const fs::path p = root / "run.cfg";
        std::ofstream out(p, std::ios::binary);
        out << text;
        return p.string();
    }
    std::string dir(const std::string& name) const { return (root / name).string(); }

    static int counter;
};
int Sandbox::counter = 0;

// Small but well-resolved setup shared by the fast command tests.  With only
// four schedule steps the limit still carries a visible regularization
// defect, so the residual certificate gets a matching threshold.
const char* kSmallConfig =
    "nodes_per_axis = 65\n"
    "n_modes = 16\n"
    "steps = 4\n"
    "test_modes = 8\n"
    "limit_residual_tol = 0.1\n";

int run(const std::string& command, const std::string& config,
        const std::string& out_dir, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    CommandArgs args;
    args.command = command;
    args.config_path = config;
    args.out_dir = out_dir;
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (out_text != nullptr) *out_text = out.str();
    if (err_text != nullptr) *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("basis-check writes a verified passing run") {
    Sandbox sb;
    const std::string cfg = sb.config(kSmallConfig);
    const std::string dir = sb.dir("basis");
    std::string out;
    CHECK(run("basis-check", cfg, dir, &out) == 0);
    CHECK(out.find("basis-check: pass") != std::string::npos);

    const nlohmann::ordered_json rep = read_json((fs::path(dir) / "report.json").string());
    CHECK(rep["command"] == "basis-check");
    CHECK(rep["status"] == "pass");
    CHECK(rep["first_failed"].is_null());
    CHECK(rep["config_echo"]["n_modes"] == 16);
    // The fixed report skeleton: sections a command has no data for are null.
    CHECK(rep["limit"].is_null());
    CHECK(rep["calibration"].is_null());
    CHECK(rep["certificates"].is_array());
    CHECK(verify_manifest(dir).empty());
}

TEST_CASE("solve-eps writes the solution and its certificates") {
    Sandbox sb;
    const std::string cfg = sb.config(std::string(kSmallConfig) + "eps = 0.5\n");
    const std::string dir = sb.dir("solve");
    CHECK(run("solve-eps", cfg, dir) == 0);
    CHECK(fs::exists(fs::path(dir) / "solution.csv"));
    CHECK(fs::exists(fs::path(dir) / "manifest.json"));

    const nlohmann::ordered_json rep = read_json((fs::path(dir) / "report.json").string());
    CHECK(rep["status"] == "pass");
    REQUIRE(rep["certificates"].is_array());
    bool saw_energy = false;
    for (const auto& c : rep["certificates"]) {
        CHECK(c["pass"] == true);
        if (c["name"] == "energy_identity") saw_energy = true;
    }
    CHECK(saw_energy);

    const std::string csv = slurp(fs::path(dir) / "solution.csv");
    CHECK(csv.rfind("x,u\n", 0) == 0);
}

TEST_CASE("continue writes the trace and the limit solution") {
    Sandbox sb;
    const std::string cfg = sb.config(kSmallConfig);
    const std::string dir = sb.dir("cont");
    CHECK(run("continue", cfg, dir) == 0);

    const std::string trace = slurp(fs::path(dir) / "trace.csv");
    // Header plus one row per schedule value (steps + 1).
    std::size_t rows = 0;
    for (char ch : trace) rows += (ch == '\n') ? 1 : 0;
    CHECK(rows == 6);
    CHECK(trace.rfind("step,eps,", 0) == 0);

    CHECK(fs::exists(fs::path(dir) / "solution.csv"));
    const nlohmann::ordered_json rep = read_json((fs::path(dir) / "report.json").string());
    CHECK(rep["status"] == "pass");
    CHECK(rep["limit"]["interior_positive"] == true);
    CHECK(verify_manifest(dir).empty());
}

TEST_CASE("report verifies a run and flags corruption") {
    Sandbox sb;
    const std::string cfg = sb.config(std::string(kSmallConfig) + "eps = 0.5\n");
    const std::string dir = sb.dir("solve");
    REQUIRE(run("solve-eps", cfg, dir) == 0);

    std::string out;
    CHECK(run("report", "", dir, &out) == 0);
    nlohmann::ordered_json rec = nlohmann::ordered_json::parse(out);
    CHECK(rec["status"] == "pass");
    CHECK(rec["manifest_ok"] == true);
    CHECK(rec["report_command"] == "solve-eps");

    {
        std::ofstream f(fs::path(dir) / "solution.csv", std::ios::binary | std::ios::app);
        f << "tampered\n";
    }
    CHECK(run("report", "", dir, &out) == 1);
    rec = nlohmann::ordered_json::parse(out);
    CHECK(rec["status"] == "fail");
    CHECK(rec["manifest_ok"] == false);
    CHECK(rec["first_bad_file"] == "solution.csv");
}

TEST_CASE("validate-extension certifies the calibration on a small basis") {
    Sandbox sb;
    const std::string cfg = sb.config(
        "nodes_per_axis = 65\n"
        "n_modes = 16\n"
        "s = 0.5\n"
        "calibration_modes = 3\n"
        "extension_intervals = 200\n");
    const std::string dir = sb.dir("ext");
    std::string out;
    CHECK(run("validate-extension", cfg, dir, &out) == 0);
    const nlohmann::ordered_json rep = read_json((fs::path(dir) / "report.json").string());
    CHECK(rep["status"] == "pass");
    CHECK(rep["calibration"]["pass"] == true);
    const double cs = rep["calibration"]["c_s"].get<double>();
    CHECK(std::abs(cs - 1.0) <= 0.01);  // s = 1/2 normalizes to 1

    // The extension identities are meaningless at s = 1.
    const std::string bad = sb.config(
        "nodes_per_axis = 65\nn_modes = 16\ns = 1.0\n");
    std::string err;
    CHECK(run("validate-extension", bad, sb.dir("ext2"), &out, &err) == 2);
    CHECK(err.find("error") != std::string::npos);
}

TEST_CASE("uniqueness-probe reports both agreement certificates") {
    Sandbox sb;
    const std::string cfg = sb.config(
        "nodes_per_axis = 65\n"
        "n_modes = 16\n"
        "steps = 4\n"
        "test_modes = 8\n"
        "probe_ratio = 0.4\n");
    const std::string dir = sb.dir("probe");
    CHECK(run("uniqueness-probe", cfg, dir) == 0);
    const nlohmann::ordered_json rep = read_json((fs::path(dir) / "report.json").string());
    CHECK(rep["status"] == "pass");
    CHECK(rep["traces"]["schedule_probe"]["pass"] == true);
    CHECK(rep["traces"]["warm_start_probe"]["pass"] == true);
    CHECK(verify_manifest(dir).empty());
}

TEST_CASE("usage and configuration problems exit with code 2") {
    Sandbox sb;
    std::string out, err;

    CHECK(run("frobnicate", sb.config(kSmallConfig), sb.dir("x"), &out, &err) == 2);
    CHECK(err.find("unknown command") != std::string::npos);

    CHECK(run("solve-eps", sb.config("s = 2.0\n"), sb.dir("y"), &out, &err) == 2);
    CHECK(err.find("error") != std::string::npos);
    CHECK(err.find("s must") != std::string::npos);

    CHECK(run("solve-eps", sb.config("s = banana\n"), sb.dir("z"), &out, &err) == 2);
    CHECK(err.rfind("config error:", 0) == 0);

    CHECK(run("solve-eps", (sb.root / "absent.cfg").string(), sb.dir("w"), &out, &err) == 2);

    // Refusing to clobber an existing non-empty run directory.
    const std::string dir = sb.dir("solve");
    REQUIRE(run("solve-eps", sb.config(std::string(kSmallConfig) + "eps = 0.5\n"), dir) == 0);
    CHECK(run("solve-eps", sb.config(std::string(kSmallConfig) + "eps = 0.5\n"), dir,
              &out, &err) == 2);
    CHECK(err.find("error") != std::string::npos);

    // report without a directory is a usage problem.
    CHECK(run("report", "", "", &out, &err) == 2);
}

TEST_CASE("repeated runs produce byte-identical artifacts") {
    Sandbox sb;
    const std::string cfg = sb.config(kSmallConfig);
    const std::string a = sb.dir("run-a");
    const std::string b = sb.dir("run-b");
    REQUIRE(run("continue", cfg, a) == 0);
    REQUIRE(run("continue", cfg, b) == 0);
    for (const char* name : {"report.json", "trace.csv", "solution.csv", "manifest.json"}) {
        CHECK(slurp(fs::path(a) / name) == slurp(fs::path(b) / name));
    }
}
