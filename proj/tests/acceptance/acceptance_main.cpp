// End-to-end acceptance run for the whole pipeline.  Each numbered criterion
// prints exactly one [PASS]/[FAIL] line with its measured quantities (plus
// indented detail lines), and the process exit code is the number of failed
// criteria.  Every tolerance and runtime budget is pinned here, in code;
// where a runtime budget is stated it is part of pass/fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracsing/basis.hpp"
#include "fracsing/commands.hpp"
#include "fracsing/continuation.hpp"
#include "fracsing/extension.hpp"
#include "fracsing/field.hpp"
#include "fracsing/geometry.hpp"
#include "fracsing/monotone.hpp"
#include "fracsing/nonlinearity.hpp"
#include "fracsing/spectral.hpp"
#include "oracles.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

/// Per-criterion recorder: sub-checks append detail lines; any failed
/// sub-check fails the criterion.
struct CritResult {
    bool pass = true;
    std::string headline;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        pass = pass && ok;
    }
    void fail(const std::string& what) { check(false, what); }
    void info(const std::string& what) { details.push_back("info " + what); }
};

/// State carried between criteria: the default-resolution bases and the two
/// default-schedule continuation runs are computed once and then audited
/// from several angles.
struct Shared {
    std::shared_ptr<const fracsing::EigenBasis> fine_1d;    // (0,pi), 1025 nodes, 256 modes
    std::shared_ptr<const fracsing::EigenBasis> coarse_1d;  // (0,pi), 257 nodes, 64 modes
    std::shared_ptr<const fracsing::EigenBasis> square;     // (0,pi)^2, 97x97 nodes, 96 modes
    std::optional<fracsing::ContinuationReport> run_1d;     // default 14-step schedule
    std::optional<fracsing::ContinuationReport> run_2d;
    std::optional<fracsing::LimitEstimate> limit_1d;
};

void ensure_fine(Shared& sh) {
    if (!sh.fine_1d)
        sh.fine_1d = fracsing::build_basis(
            fracsing::make_grid(fracsing::make_interval(kPi), {1025}), 256);
}

void ensure_coarse(Shared& sh) {
    if (!sh.coarse_1d)
        sh.coarse_1d = fracsing::build_basis(
            fracsing::make_grid(fracsing::make_interval(kPi), {257}), 64);
}

// 1. The operator is diagonal on the eigenbasis: applying it to a unit
//    coefficient vector must return lambda_k^s on entry k and zero elsewhere,
//    to 1e-12 relative, for k <= 16 and s in {0.25, 0.5, 0.75}.
void crit_eigen_identity(Shared&, CritResult& r) {
    using namespace fracsing;
    auto basis = build_basis(make_grid(make_interval(kPi), {129}), 16);
    double worst = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        for (std::size_t k = 0; k < 16; ++k) {
            SpectralField e;
            e.basis = basis.get();
            e.coeffs.assign(16, 0.0);
            e.coeffs[k] = 1.0;
            const SpectralField a = apply_fractional(*basis, e, s);
            const double target = std::pow(basis->eigenvalue(k), s);
            for (std::size_t j = 0; j < a.coeffs.size(); ++j) {
                const double want = (j == k) ? target : 0.0;
                worst = std::max(worst, std::abs(a.coeffs[j] - want) / target);
            }
        }
    }
    r.check(worst <= 1e-12,
            fmt("apply_fractional(phi_k) = lambda_k^s phi_k: max rel defect %.3g <= 1e-12", worst));
    r.headline = fmt("max rel defect %.3g over k <= 16, s in {0.25,0.5,0.75}", worst);
}

// 2. Classical reduction s = 1.  (a) The eps = 1 supersolution solves
//    -w'' = 1, i.e. w = x(pi-x)/2, matched to 1e-4 sup with 256 modes.
//    (b) solve_regularized at s = 1, eps = 1, p = 0.5 agrees with an
//    independent finite-difference damped-Newton solve of
//    -u'' = (1+u)^(-1/2) to 1e-6 sup, both on 8193 nodes.
void crit_classical_reduction(Shared& sh, CritResult& r) {
    using namespace fracsing;
    ensure_fine(sh);
    const SingularRHS g{1.0, 0.5};
    const GridField w = build_supersolution(*sh.fine_1d, 1.0, g);
    const auto& nodes = sh.fine_1d->grid().axes[0].nodes;
    double worst_super = 0.0;
    for (std::size_t m = 0; m < w.values.size(); ++m) {
        const double x = nodes[m];
        worst_super = std::max(worst_super, std::abs(w.values[m] - 0.5 * x * (kPi - x)));
    }
    r.check(worst_super <= 1e-4,
            fmt("supersolution vs x(pi-x)/2: sup defect %.3g <= 1e-4 (256 modes)", worst_super));

    auto basis = build_basis(make_grid(make_interval(kPi), {8193}), 1024);
    const SolveOptions opts;
    const SolveReport rep = solve_regularized(*basis, FracExponent{1.0, 0.5}, 1.0, opts);
    r.check(rep.bracket.converged, "regularized solve at s = 1, eps = 1 converged");
    const std::vector<double> fd = oracles::fd_newton_singular(kPi, 8193, 1.0, 0.5);
    double worst_fd = 0.0;
    for (std::size_t m = 0; m < fd.size(); ++m)
        worst_fd = std::max(worst_fd, std::abs(rep.solution().values[m] - fd[m]));
    r.check(worst_fd <= 1e-6,
            fmt("solve vs finite-difference Newton oracle: sup diff %.3g <= 1e-6", worst_fd));
    r.headline = fmt("supersolution defect %.3g, oracle gap %.3g", worst_super, worst_fd);
}

// 3. Bracketing: on every solve the ascending/descending sequences must be
//    monotone and confined to [sub, super] within tol_pos = 1e-8, and the
//    final gap must be <= 10 * tol_inner = 1e-9; swept over
//    (s,p) in {0.25,0.5,0.75} x {0.3,0.5,0.9} and eps in {0.5, 0.1}.
void crit_bracketing(Shared& sh, CritResult& r) {
    using namespace fracsing;
    ensure_coarse(sh);
    const SolveOptions opts;
    double worst_margin = kInf;
    double worst_gap = 0.0;
    bool all_converged = true;
    int n_solves = 0;
    for (double s : {0.25, 0.5, 0.75})
        for (double p : {0.3, 0.5, 0.9})
            for (double eps : {0.5, 0.1}) {
                const SolveReport rep =
                    solve_regularized(*sh.coarse_1d, FracExponent{s, p}, eps, opts);
                ++n_solves;
                all_converged = all_converged && rep.bracket.converged;
                const BracketReport& b = rep.bracket;
                worst_margin =
                    std::min({worst_margin, b.worst_ascending_step, b.worst_descending_step,
                              b.worst_confinement_low, b.worst_confinement_high});
                worst_gap = std::max(worst_gap, b.gap);
            }
    r.check(all_converged, fmt("all %d solves converged", n_solves));
    r.check(worst_margin >= -opts.tol_pos,
            fmt("monotone and confined: worst margin %.3g >= -1e-8", worst_margin));
    r.check(worst_gap <= 10.0 * opts.tol_inner,
            fmt("bracket gap: worst %.3g <= 10 tol_inner = 1e-9", worst_gap));
    r.headline = fmt("%d solves: worst margin %.3g, worst gap %.3g", n_solves, worst_margin,
                     worst_gap);
}

// 4. Ordering along the default 14-step schedule on (0,pi) and on (0,pi)^2:
//    at every step u_eps >= u_delta and eps + u_eps <= delta + u_delta
//    nodewise within tol_pos = 1e-8, and the increment obeys
//    ||u_eps - u_delta||_inf <= (delta - eps) + 2e-8.
void crit_ordering(Shared& sh, CritResult& r) {
    using namespace fracsing;
    ensure_fine(sh);
    const FracExponent exps{0.5, 0.5};
    const EpsSchedule sched;  // 0.5 * 0.5^k, 14 halvings
    const SolveOptions opts;
    sh.run_1d = run_continuation(*sh.fine_1d, exps, sched, opts);
    sh.square =
        build_basis(make_grid(make_rectangle(kPi, kPi), {97, 97}), 96);
    sh.run_2d = run_continuation(*sh.square, exps, sched, opts);

    double worst_ord = kInf;
    double worst_excess = -kInf;
    auto audit = [&](const ContinuationReport& rep, const char* label) {
        r.check(rep.completed && rep.steps.size() == sched.steps + 1,
                fmt("%s: completed %zu/%zu steps", label, rep.steps.size(), sched.steps + 1));
        double ord = kInf;
        double excess = -kInf;
        for (std::size_t k = 1; k < rep.steps.size(); ++k) {
            const StepRecord& st = rep.steps[k];
            ord = std::min({ord, st.ord_grow_margin, st.ord_shift_margin});
            excess = std::max(excess, st.increment - st.envelope);
        }
        r.check(ord >= -1e-8, fmt("%s: worst ordering margin %.3g >= -1e-8", label, ord));
        r.check(excess <= 2e-8,
                fmt("%s: max (increment - envelope) %.3g <= 2e-8", label, excess));
        worst_ord = std::min(worst_ord, ord);
        worst_excess = std::max(worst_excess, excess);
    };
    audit(*sh.run_1d, "interval");
    audit(*sh.run_2d, "square");
    r.headline =
        fmt("both domains: worst margin %.3g, max envelope excess %.3g", worst_ord, worst_excess);
}

// 5. Uniform bound and limit: the sup-norm trace of the interval run is
//    finite and nondecreasing, the sandwich inequality certifies the tail
//    bound ||u - u_eps_K||_inf <= eps_K ~ 3.05e-5, and the limit candidate
//    is interior-positive.
void crit_uniform_limit(Shared& sh, CritResult& r) {
    using namespace fracsing;
    if (!sh.run_1d || !sh.run_1d->completed) {
        r.fail("no completed interval continuation to audit (criterion 4 must run first)");
        return;
    }
    sh.limit_1d = estimate_limit(*sh.fine_1d, *sh.run_1d, 10, 1e-8);
    const LimitEstimate& le = *sh.limit_1d;

    bool finite = true;
    double prev = -kInf;
    double worst_drop = -kInf;
    for (const StepRecord& st : sh.run_1d->steps) {
        finite = finite && std::isfinite(st.sup_norm);
        worst_drop = std::max(worst_drop, prev - st.sup_norm);
        prev = st.sup_norm;
    }
    r.check(finite && le.sup_trace_bounded, "sup-norm trace finite and bounded");
    r.check(le.sup_trace_nondecreasing && worst_drop <= 1e-8,
            fmt("sup-norm trace nondecreasing: worst drop %.3g <= 1e-8", worst_drop));
    r.check(le.increments_within_envelope,
            "sandwich inequality: every increment within its (delta - eps) envelope");
    r.check(le.tail_bound <= 3.06e-5,
            fmt("tail bound ||u - u_eps_K||_inf <= %.6g <= 3.06e-5", le.tail_bound));
    r.check(le.interior_positive && le.min_interior > 0.0,
            fmt("limit interior-positive: min interior %.3g > 0", le.min_interior));
    r.headline = fmt("sup trace -> %.6f, tail bound %.3g, min interior %.3g",
                     sh.run_1d->steps.back().sup_norm, le.tail_bound, le.min_interior);
}

// 6. Energy identity per solve: |hs_norm^2 - <(eps+u)^(-p), u>| <= 1e-6
//    relative on every step of both runs; the bound side <(1+u)^(1-p), 1>
//    is recorded, chained, and uniformly bounded along the schedule by the
//    a-priori cap |domain| * (1 + max sup)^{1-p}.
void crit_energy_identity(Shared& sh, CritResult& r) {
    using namespace fracsing;
    if (!sh.run_1d || !sh.run_2d) {
        r.fail("continuation runs unavailable (criterion 4 must run first)");
        return;
    }
    double headline_rel = 0.0;
    double headline_bound = 0.0;
    auto audit = [&](const ContinuationReport& rep, double measure, const char* label) {
        double worst_rel = 0.0;
        double max_bound = 0.0;
        double sup_max = 0.0;
        bool finite = true;
        bool chain = true;
        for (const StepRecord& st : rep.steps) {
            const double rel = std::abs(st.energy_lhs - st.energy_mid) /
                               std::max(1.0, std::abs(st.energy_lhs));
            worst_rel = std::max(worst_rel, rel);
            finite = finite && std::isfinite(st.bound_eps) && std::isfinite(st.bound_one);
            const double slack = 1e-9 * std::max(1.0, st.bound_one);
            chain = chain && st.energy_mid <= st.bound_eps + slack &&
                    st.bound_eps <= st.bound_one + slack;
            max_bound = std::max(max_bound, st.bound_one);
            sup_max = std::max(sup_max, st.sup_norm);
        }
        const double cap = measure * std::pow(1.0 + sup_max, 1.0 - rep.exps.p) + 1e-9;
        r.check(worst_rel <= 1e-6,
                fmt("%s: energy identity worst rel defect %.3g <= 1e-6", label, worst_rel));
        r.check(finite && chain,
                fmt("%s: bound chain <g(u),u> <= <(eps+u)^{1-p},1> <= <(1+u)^{1-p},1> held",
                    label));
        r.check(max_bound <= cap,
                fmt("%s: bound side max %.6g <= |domain|(1 + max sup)^{1-p} = %.6g", label,
                    max_bound, cap));
        headline_rel = std::max(headline_rel, worst_rel);
        headline_bound = std::max(headline_bound, max_bound);
    };
    audit(*sh.run_1d, kPi, "interval");
    audit(*sh.run_2d, kPi * kPi, "square");
    r.headline =
        fmt("worst rel defect %.3g, bound side max %.6g", headline_rel, headline_bound);
}

// 7. Extension equivalence: the flux calibration constant has spread <= 1%
//    over the first 5 modes for each s; at s = 0.5 it equals 1 within 1% and
//    the profile equals e^(-sqrt(lambda) y) within 1e-6; the weighted
//    cylinder energy matches c_s * hs_norm^2 within 1% on random fields.
void crit_extension(Shared& sh, CritResult& r) {
    using namespace fracsing;
    ensure_coarse(sh);
    const YGridSpec spec;  // 400 graded intervals, adequacy 10
    const double svals[3] = {0.25, 0.5, 0.75};
    CalibrationResult cals[3];
    double worst_spread = 0.0;
    for (int i = 0; i < 3; ++i) {
        cals[i] = calibrate_cs(*sh.coarse_1d, svals[i], 5, spec, 6);
        worst_spread = std::max(worst_spread, cals[i].spread);
        r.check(cals[i].extraction_ok && cals[i].spread <= 0.01,
                fmt("s = %.2f: c_s = %.6f, spread %.3g <= 1e-2 over 5 modes", svals[i],
                    cals[i].c_s, cals[i].spread));
    }
    r.check(std::abs(cals[1].c_s - 1.0) <= 0.01,
            fmt("s = 0.5: c_s = %.6f within 1%% of the closed-form value 1", cals[1].c_s));

    // Fine grid for the pointwise profile identity at s = 1/2; the
    // truncation (e^-16 ~ 1e-7) and scheme error both sit below 1e-6 here.
    const YGridSpec fine{12000, 3.0, 16.0};
    double worst_prof = 0.0;
    for (double lambda : {1.0, 4.0}) {
        const YGrid yg = ygrid_for_lambda(lambda, fine);
        const std::vector<double> th = extension_profile(lambda, 0.5, yg);
        for (std::size_t j = 0; j < th.size(); ++j)
            worst_prof = std::max(
                worst_prof, std::abs(th[j] - std::exp(-std::sqrt(lambda) * yg.nodes[j])));
    }
    r.check(worst_prof <= 1e-6,
            fmt("s = 0.5 profile vs e^(-sqrt(lambda) y): sup defect %.3g <= 1e-6", worst_prof));

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst_energy = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int trial = 0; trial < 3; ++trial) {
            SpectralField c;
            c.basis = sh.coarse_1d.get();
            c.coeffs.resize(16);
            for (double& v : c.coeffs) v = unit(rng);
            const CylinderField cf = extend_field(*sh.coarse_1d, c, svals[i], spec);
            const double hs = hs_norm(*sh.coarse_1d, c, svals[i]);
            const double target = cals[i].c_s * hs * hs;
            worst_energy =
                std::max(worst_energy, std::abs(cylinder_energy(cf) - target) / target);
        }
    }
    r.check(worst_energy <= 0.01,
            fmt("cylinder energy vs c_s hs_norm^2: worst rel diff %.3g <= 1e-2 "
                "(9 random fields)",
                worst_energy));
    r.headline = fmt("spread %.3g, c_s(0.5) = %.4f, profile defect %.3g, energy diff %.3g",
                     worst_spread, cals[1].c_s, worst_prof, worst_energy);
}

// 8. Uniqueness probes at default resolution: a second geometric schedule
//    (ratio 0.4) landing on the same eps_K must reproduce the limit within
//    2 * eps_K, and a fresh-start run must match the warm-start run within
//    10 * tol_inner.
void crit_uniqueness(Shared& sh, CritResult& r) {
    using namespace fracsing;
    ensure_fine(sh);
    const FracExponent exps{0.5, 0.5};
    const EpsSchedule a;
    const SolveOptions opts;

    const double eps_end = a.last();
    const double ratio_b = 0.4;
    long k = static_cast<long>(std::floor(std::log(eps_end) / std::log(ratio_b)));
    double eps0_b = eps_end / std::pow(ratio_b, static_cast<double>(k));
    while (eps0_b >= 1.0 && k > 1) {
        --k;
        eps0_b = eps_end / std::pow(ratio_b, static_cast<double>(k));
    }
    EpsSchedule b;
    b.eps0 = eps0_b;
    b.ratio = ratio_b;
    b.steps = static_cast<std::size_t>(k);

    const ProbeResult schedules = uniqueness_probe(*sh.fine_1d, exps, a, b, opts);
    r.check(schedules.pass && schedules.sup_difference <= 2.0 * eps_end,
            fmt("schedule probe: ||u_A - u_B||_inf = %.3g <= 2 eps_K = %.3g "
                "(B: eps0 %.4f, ratio 0.4, %ld steps)",
                schedules.sup_difference, 2.0 * eps_end, eps0_b, k));
    const ProbeResult warmth = warm_start_probe(*sh.fine_1d, exps, a, opts);
    r.check(warmth.pass && warmth.sup_difference <= 10.0 * opts.tol_inner,
            fmt("warm vs fresh starts: ||diff||_inf = %.3g <= 10 tol_inner = 1e-9",
                warmth.sup_difference));
    r.headline = fmt("schedule diff %.3g (cap %.3g), warm/fresh diff %.3g",
                     schedules.sup_difference, 2.0 * eps_end, warmth.sup_difference);
}

// 9. Weak residual of the limit candidate against rhs = u^(-p): max over the
//    first 10 modes <= 1e-3 at default resolution, and halving h must shrink
//    the defect to <= 0.7 of its coarse value.
void crit_limit_residual(Shared& sh, CritResult& r) {
    using namespace fracsing;
    if (!sh.limit_1d) {
        r.fail("no limit estimate available (criteria 4/5 must run first)");
        return;
    }
    const double coarse = sh.limit_1d->max_weak_residual;
    r.check(sh.limit_1d->interior_positive,
            "limit interior-positive (residual vs u^(-p) well defined)");
    r.check(coarse <= 1e-3,
            fmt("default resolution: max weak residual %.3g <= 1e-3 (first 10 modes)", coarse));

    auto refined_basis = build_basis(make_grid(make_interval(kPi), {2049}), 256);
    const FracExponent exps{0.5, 0.5};
    const EpsSchedule sched;
    const SolveOptions opts;
    const ContinuationReport rep = run_continuation(*refined_basis, exps, sched, opts);
    if (!rep.completed) {
        r.fail("refined continuation did not complete: " + rep.message);
        return;
    }
    const LimitEstimate le = estimate_limit(*refined_basis, rep, 10, 1e-8);
    const double ratio = le.max_weak_residual / coarse;
    r.check(ratio <= 0.7, fmt("halved h: residual %.3g, ratio %.3f <= 0.7",
                              le.max_weak_residual, ratio));
    if (ratio > 0.7) {
        // Diagnostic only: refine the schedule together with the grid to
        // separate the fixed-eps_K part of the defect from the quadrature
        // part.  Not part of pass/fail.
        EpsSchedule joint;
        joint.steps = 16;
        const ContinuationReport repj = run_continuation(*refined_basis, exps, joint, opts);
        if (repj.completed) {
            const LimitEstimate lej = estimate_limit(*refined_basis, repj, 10, 1e-8);
            r.info(fmt("joint refinement (h/2, eps_K/4): residual %.3g, ratio %.3f vs coarse",
                       lej.max_weak_residual, lej.max_weak_residual / coarse));
        }
    }
    r.headline = fmt("residual %.3g -> %.3g under h/2 (ratio %.3f)", coarse,
                     le.max_weak_residual, ratio);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return f ? ss.str() : std::string();
}

// 10. Determinism: two `continue` runs from the same config must produce
//     byte-identical report.json, trace.csv, solution.csv and manifest.json.
void crit_determinism(Shared&, CritResult& r) {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "acceptance-determinism";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);
    const fs::path cfg = root / "run.cfg";
    {
        std::ofstream f(cfg, std::ios::binary);
        f << "nodes_per_axis = 257\n"
             "n_modes = 64\n"
             "steps = 8\n"
             "test_modes = 8\n"
             "limit_residual_tol = 0.05\n";
    }
    auto run_once = [&](const fs::path& dir) {
        std::ostringstream out, err;
        fracsing::CommandArgs args;
        args.command = "continue";
        args.config_path = cfg.string();
        args.out_dir = dir.string();
        return fracsing::run_command(args, out, err);
    };
    const int rc_a = run_once(root / "a");
    const int rc_b = run_once(root / "b");
    r.check(rc_a == 0 && rc_b == 0, fmt("both runs exited 0 (got %d and %d)", rc_a, rc_b));
    std::size_t bytes = 0;
    for (const char* name : {"report.json", "trace.csv", "solution.csv", "manifest.json"}) {
        const std::string a = slurp(root / "a" / name);
        const std::string b = slurp(root / "b" / name);
        r.check(!a.empty() && a == b, fmt("%s: %zu bytes, byte-identical", name, a.size()));
        bytes += a.size();
    }
    fs::remove_all(root, ec);
    r.headline = fmt("4 artifacts, %zu bytes total, byte-identical across runs", bytes);
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        double budget;  // seconds; <= 0 means no stated budget
        void (*fn)(Shared&, CritResult&);
    };
    const Entry entries[] = {
        {1, "eigen-identity", 1.0, crit_eigen_identity},
        {2, "classical-reduction", 10.0, crit_classical_reduction},
        {3, "bracketing", 120.0, crit_bracketing},
        {4, "epsilon-ordering", 600.0, crit_ordering},
        {5, "uniform-limit", 0.0, crit_uniform_limit},
        {6, "energy-identity", 0.0, crit_energy_identity},
        {7, "extension-equivalence", 30.0, crit_extension},
        {8, "uniqueness-probes", 0.0, crit_uniqueness},
        {9, "limit-residual", 0.0, crit_limit_residual},
        {10, "determinism", 0.0, crit_determinism},
    };

    std::printf("acceptance: regularized continuation pipeline, %zu criteria\n",
                std::size(entries));
    Shared sh;
    int failures = 0;
    for (const Entry& e : entries) {
        CritResult res;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(sh, res);
        } catch (const std::exception& ex) {
            res.fail(std::string("unhandled exception: ") + ex.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
        if (e.budget > 0.0 && dt > e.budget)
            res.fail(fmt("runtime %.2f s exceeds the %.0f s budget", dt, e.budget));
        if (!res.pass) ++failures;
        if (res.headline.empty()) res.headline = res.pass ? "all checks held" : "see details";
        if (e.budget > 0.0)
            std::printf("[%s] %2d %-22s %s  (%.2f s, budget %.0f s)\n",
                        res.pass ? "PASS" : "FAIL", e.id, e.name, res.headline.c_str(), dt,
                        e.budget);
        else
            std::printf("[%s] %2d %-22s %s  (%.2f s)\n", res.pass ? "PASS" : "FAIL", e.id,
                        e.name, res.headline.c_str(), dt);
        for (const std::string& d : res.details) std::printf("        %s\n", d.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d of %zu criteria passed\n",
                static_cast<int>(std::size(entries)) - failures, std::size(entries));
    return failures;
}
