#include "fracsing/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracsing {

void EpsSchedule::validate() const {
    if (!(eps0 > 0.0) || !(eps0 < 1.0))
        throw std::invalid_argument("EpsSchedule: eps0 must lie in (0,1), got " +
                                    std::to_string(eps0));
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw std::invalid_argument("EpsSchedule: ratio must lie in (0,1), got " +
                                    std::to_string(ratio));
}

std::vector<double> EpsSchedule::values() const {
    validate();
    std::vector<double> v(steps + 1);
    double e = eps0;
    for (std::size_t k = 0; k <= steps; ++k) {
        v[k] = e;
        e *= ratio;
    }
    return v;
}

double EpsSchedule::last() const { return values().back(); }

namespace {

// Quadrature of (shift + u)^(1-p) over the domain (interior nodes).
double chain_bound(const EigenBasis& basis, const std::vector<double>& u, double shift,
                   double p) {
    const auto& wq = basis.interior_quad_weights();
    double acc = 0.0;
    for (std::size_t m = 0; m < u.size(); ++m) {
        if (wq[m] == 0.0) continue;
        const double base = shift + std::max(u[m], 0.0);
        acc += wq[m] * std::pow(base, 1.0 - p);
    }
    return acc;
}

}  // namespace

ContinuationReport run_continuation(const EigenBasis& basis, const FracExponent& exps,
                                    const EpsSchedule& schedule, const SolveOptions& opts,
                                    bool warm_start) {
    schedule.validate();
    check_order(exps.s);

    ContinuationReport rep;
    rep.schedule = schedule;
    rep.exps = exps;

    const std::vector<double> eps_values = schedule.values();
    bool force_fresh = false;

    for (std::size_t k = 0; k < eps_values.size(); ++k) {
        const double eps = eps_values[k];

        StepRecord rec;
        rec.eps = eps;

        std::optional<GridField> warm;
        if (warm_start && !force_fresh && k > 0) warm = rep.steps.back().solve.bracket.lower;

        try {
            rec.solve = solve_regularized(basis, exps, eps, opts, warm);
            rec.warm_used = warm.has_value();
        } catch (const SubsolutionCertError&) {
            // The previous solution failed its subsolution certificate at the
            // new eps (truncation noise); fall back to a fresh bracket.
            rec.solve = solve_regularized(basis, exps, eps, opts, std::nullopt);
            rec.fresh_restart = true;
        }
        force_fresh = false;

        // A certified warm bracket can still go wrong mid-iteration: the
        // first sweep adds the wall-layer increment g_eps(u_delta) -
        // g_delta(u_delta), which the truncated basis need not propagate
        // nodewise monotonically (on a rectangle this shows up long before
        // the interval case).  The fresh bracket never forms that increment,
        // so when a warm solve comes back uncertified, re-run the step from
        // sub = 0 and flag it rather than giving up.
        if (rec.warm_used &&
            (!rec.solve.bracket.converged || rec.solve.bracket.discretization_failure ||
             !rec.solve.bracket.ordering_ok)) {
            rec.solve = solve_regularized(basis, exps, eps, opts, std::nullopt);
            rec.warm_used = false;
            rec.fresh_restart = true;
        }

        if (!rec.solve.bracket.converged || rec.solve.bracket.discretization_failure) {
            rep.failed_step = std::move(rec.solve);
            rep.message = "continuation stopped at step " + std::to_string(k) +
                          " (eps = " + std::to_string(eps) + "): " + rep.failed_step->bracket.message;
            rep.completed = false;
            rep.all_certified = false;
            return rep;
        }

        rec.sup_norm = rec.solve.sup_norm_solution;
        rec.min_interior = rec.solve.min_interior_solution;
        rec.energy_lhs = rec.solve.bracket.energy_lhs;
        rec.energy_mid = rec.solve.bracket.energy_rhs;
        rec.bound_eps = chain_bound(basis, rec.solve.bracket.lower.values, eps, exps.p);
        rec.bound_one = chain_bound(basis, rec.solve.bracket.lower.values, 1.0, exps.p);
        rec.ordering_ok = rec.solve.bracket.ordering_ok;

        if (k > 0) {
            const StepRecord& prev = rep.steps.back();
            const auto& u_now = rec.solve.bracket.lower.values;
            const auto& u_prev = prev.solve.bracket.lower.values;
            const double delta = prev.eps;
            const double scale = std::max(1.0, prev.sup_norm);

            double grow = std::numeric_limits<double>::infinity();
            double shift = std::numeric_limits<double>::infinity();
            double inc = 0.0;
            for (std::size_t m = 0; m < u_now.size(); ++m) {
                const double d = u_now[m] - u_prev[m];
                grow = std::min(grow, d);
                shift = std::min(shift, (delta - eps) - d);
                inc = std::max(inc, std::abs(d));
            }
            rec.ord_grow_margin = grow;    // u_eps - u_delta >= 0
            rec.ord_shift_margin = shift;  // (delta + u_delta) - (eps + u_eps) >= 0
            rec.increment = inc;
            rec.envelope = delta - eps;

            const double tol = opts.tol_pos * scale;
            rec.ordering_ok = rec.ordering_ok && grow >= -tol && shift >= -tol;
            if (grow < -10.0 * tol || shift < -10.0 * tol) {
                rec.ordering_ok = false;
                rep.all_certified = false;
                rep.message = "ordering between eps = " + std::to_string(delta) + " and eps = " +
                              std::to_string(eps) + " violated beyond 10 x tol_pos; next step "
                              "restarts from a fresh bracket";
                force_fresh = true;
            }
        }

        rep.steps.push_back(std::move(rec));
    }

    rep.completed = true;
    rep.all_certified = true;
    for (const auto& r : rep.steps)
        if (!r.ordering_ok) rep.all_certified = false;
    return rep;
}

LimitEstimate estimate_limit(const EigenBasis& basis, const ContinuationReport& report,
                             std::size_t test_modes, double tol_pos) {
    if (report.steps.size() < 3)
        throw std::invalid_argument("estimate_limit: need at least 3 completed steps, have " +
                                    std::to_string(report.steps.size()));

    const StepRecord& last = report.steps.back();
    LimitEstimate est;
    est.limit = last.solve.bracket.lower;
    est.coeffs = last.solve.bracket.lower_coeffs;
    est.tail_bound = last.eps;
    est.sup_norm = last.sup_norm;
    est.min_interior = last.min_interior;
    est.interior_positive = est.min_interior > 0.0;

    // Weak residual against the singular limit right-hand side u^-p.  Only
    // meaningful when the candidate is strictly positive inside.
    if (est.interior_positive) {
        const SingularRHS g0{0.0, report.exps.p};
        const auto& wq = basis.interior_quad_weights();
        GridField rhs;
        rhs.grid = &basis.grid();
        rhs.values.assign(est.limit.values.size(), 0.0);
        for (std::size_t m = 0; m < rhs.values.size(); ++m)
            if (wq[m] != 0.0) rhs.values[m] = eval_g(g0, est.limit.values[m]);
        est.weak_residual =
            weak_residual(basis, est.limit, rhs, report.exps.s, test_modes);
        for (double v : est.weak_residual)
            est.max_weak_residual = std::max(est.max_weak_residual, std::abs(v));
    }

    const double scale = std::max(1.0, est.sup_norm);
    const double tol = tol_pos * scale;

    est.increments_within_envelope = true;
    est.increments_nonincreasing = true;
    est.sup_trace_nondecreasing = true;
    double prev_inc = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < report.steps.size(); ++k) {
        const StepRecord& r = report.steps[k];
        if (r.increment > r.envelope + 2.0 * tol) est.increments_within_envelope = false;
        if (r.increment > prev_inc + tol) est.increments_nonincreasing = false;
        prev_inc = r.increment;
        if (report.steps[k].sup_norm < report.steps[k - 1].sup_norm - tol)
            est.sup_trace_nondecreasing = false;
    }
    est.sup_trace_bounded = true;
    for (const auto& r : report.steps)
        if (r.sup_norm > est.sup_norm + report.schedule.eps0 + tol) est.sup_trace_bounded = false;

    return est;
}

ProbeResult uniqueness_probe(const EigenBasis& basis, const FracExponent& exps,
                             const EpsSchedule& sched_a, const EpsSchedule& sched_b,
                             const SolveOptions& opts) {
    const double end_a = sched_a.last();
    const double end_b = sched_b.last();
    if (std::abs(end_a - end_b) > 1e-9 * std::max(end_a, end_b))
        throw std::invalid_argument(
            "uniqueness_probe: schedules end at different eps (" + std::to_string(end_a) +
            " vs " + std::to_string(end_b) + "); align them before probing");

    const ContinuationReport a = run_continuation(basis, exps, sched_a, opts);
    const ContinuationReport b = run_continuation(basis, exps, sched_b, opts);
    if (!a.completed || !b.completed)
        throw std::runtime_error("uniqueness_probe: a continuation did not complete: " +
                                 (a.completed ? b.message : a.message));

    ProbeResult res;
    res.eps_end = end_a;
    res.sup_difference = sup_diff(a.last_solution(), b.last_solution());
    res.threshold = std::max(2.0 * end_a, 10.0 * opts.tol_inner);
    res.pass = res.sup_difference <= res.threshold;
    return res;
}

ProbeResult warm_start_probe(const EigenBasis& basis, const FracExponent& exps,
                             const EpsSchedule& sched, const SolveOptions& opts) {
    const ContinuationReport warm = run_continuation(basis, exps, sched, opts, true);
    const ContinuationReport fresh = run_continuation(basis, exps, sched, opts, false);
    if (!warm.completed || !fresh.completed)
        throw std::runtime_error("warm_start_probe: a continuation did not complete");

    ProbeResult res;
    res.eps_end = sched.last();
    res.sup_difference = sup_diff(warm.last_solution(), fresh.last_solution());
    // Both runs end at the same eps, so the limits must agree to iteration
    // accuracy, not merely to the regularization scale.
    res.threshold = 10.0 * opts.tol_inner;
    res.pass = res.sup_difference <= res.threshold;
    return res;
}

}  // namespace fracsing
