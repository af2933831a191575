#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracsing/monotone.hpp"

namespace fracsing {

/// Geometric regularization schedule eps_k = eps0 * ratio^k, k = 0..steps.
/// `steps` counts the reductions after eps0, so values() has steps+1 entries
/// and the defaults (0.5, 0.5, 14) end at eps_14 ~ 3.05e-5.
struct EpsSchedule {
    double eps0 = 0.5;
    double ratio = 0.5;
    std::size_t steps = 14;

    std::vector<double> values() const;
    double last() const;

    /// Throws std::invalid_argument unless eps0 in (0,1) and ratio in (0,1).
    void validate() const;
};

/// Everything recorded about one schedule step.
struct StepRecord {
    double eps = 0.0;
    SolveReport solve;

    bool warm_used = false;
    bool fresh_restart = false;  ///< warm start rejected; re-solved from zero

    // Ordering against the previous step's solution u_delta (delta > eps):
    // the solutions must grow (u_eps >= u_delta) while the shifted fields
    // shrink (eps + u_eps <= delta + u_delta).  Worst signed margins;
    // nonnegative within tol_pos * scale means certified.
    double ord_grow_margin = 0.0;
    double ord_shift_margin = 0.0;
    bool ordering_ok = true;

    double increment = 0.0;  ///< sup |u_eps - u_delta|
    double envelope = 0.0;   ///< delta - eps, the proven bound on the increment

    double sup_norm = 0.0;
    double min_interior = 0.0;

    // Energy chain: ||u||^2_{H^s} = <g(u),u> <= <(eps+u)^{1-p},1> <= <(1+u)^{1-p},1>.
    double energy_lhs = 0.0;
    double energy_mid = 0.0;
    double bound_eps = 0.0;
    double bound_one = 0.0;
};

struct ContinuationReport {
    EpsSchedule schedule;
    FracExponent exps;
    std::vector<StepRecord> steps;

    bool completed = false;      ///< every scheduled step converged
    bool all_certified = false;  ///< no ordering violation anywhere
    std::string message;

    /// Solve report of the step that broke the run, if any (diagnostics).
    std::optional<SolveReport> failed_step;

    const GridField& last_solution() const { return steps.back().solve.bracket.lower; }
};

/// Walk the schedule from eps0 downward.  Each converged solution seeds the
/// next solve as its subsolution (warm_start = true); if a warm start fails
/// its certificate -- up front, or later by degrading the in-solve ordering
/// or convergence -- the step is re-run from sub = 0 and flagged; if the
/// ordering against the previous step breaks beyond 10 x tol_pos, the next
/// step is run from sub = 0.  A step that fails from a fresh bracket
/// truncates the report at the last good step.
ContinuationReport run_continuation(const EigenBasis& basis, const FracExponent& exps,
                                    const EpsSchedule& schedule, const SolveOptions& opts,
                                    bool warm_start = true);

/// Diagnostics attached to the limit candidate u_{eps_K}.
struct LimitEstimate {
    GridField limit;
    SpectralField coeffs;
    double tail_bound = 0.0;  ///< ||u - u_eps_K||_inf <= eps_K by the sandwich bound
    double sup_norm = 0.0;
    double min_interior = 0.0;

    bool interior_positive = false;
    std::vector<double> weak_residual;  ///< vs rhs = limit^-p, first test_modes modes
    double max_weak_residual = 0.0;

    bool increments_within_envelope = false;  ///< d_k <= envelope_k + 2 tol_pos scale
    bool increments_nonincreasing = false;    ///< within tol_pos * scale
    bool sup_trace_nondecreasing = false;     ///< uniform bound trace is monotone
    bool sup_trace_bounded = false;           ///< by ||u_eps_K||_inf + eps0
};

/// Requires at least 3 completed steps (throws std::invalid_argument).
/// The weak residual of the limit is only computed when the candidate is
/// interior-positive; otherwise the vector stays empty and the flag is off.
LimitEstimate estimate_limit(const EigenBasis& basis, const ContinuationReport& report,
                             std::size_t test_modes, double tol_pos);

/// Two schedules ending at the same eps must produce the same limit within
/// max(2 * eps_end, 10 * tol_inner).  Throws if the end points differ.
struct ProbeResult {
    double sup_difference = 0.0;
    double eps_end = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

ProbeResult uniqueness_probe(const EigenBasis& basis, const FracExponent& exps,
                             const EpsSchedule& sched_a, const EpsSchedule& sched_b,
                             const SolveOptions& opts);

/// Same-schedule sensitivity probe: fresh starts (sub = 0 everywhere) vs
/// warm starts end at the same eps, so they must agree to iteration
/// accuracy: threshold 10 * tol_inner.
ProbeResult warm_start_probe(const EigenBasis& basis, const FracExponent& exps,
                             const EpsSchedule& sched, const SolveOptions& opts);

}  // namespace fracsing
