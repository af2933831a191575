#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fracsing/field.hpp"

namespace fracsing {

/// The regularized singular right-hand side g(r) = (eps + r)^(-p).
///
/// eps > 0 gives the approximate problems used by the continuation; eps = 0
/// is the singular limit itself and is only ever evaluated at strictly
/// positive arguments (diagnostics on the limit candidate).
struct SingularRHS {
    double eps = 0.5;
    double p = 0.5;
};

/// Evaluate g at a nodal value r.  Negative r is clamped to zero first:
/// spectral truncation can undershoot slightly below zero near the wall and
/// the clamp keeps g defined (and keeps the supersolution bound g <= eps^-p
/// exact).  Throws std::domain_error when eps = 0 and r <= 0.
double eval_g(const SingularRHS& g, double r);

/// Nodewise application over a field (boundary entries included; they hold
/// r = 0, which is fine for eps > 0).
std::vector<double> eval_g(const SingularRHS& g, const std::vector<double>& r);

/// Upper bound for |g'| on [lower, infinity): p * (eps + lower)^-(p+1).
/// This is what the monotone iteration's shift has to dominate.  Throws
/// std::domain_error when eps + lower <= 0.
double lipschitz_bound(const SingularRHS& g, double lower);

/// A user-supplied right-hand side for the generic comparison machinery.
/// `eval` must be defined on (0, infinity); `blowup_margin` is the declared
/// gap used by the (g1) blow-up test below.
struct GeneralRHS {
    std::function<double(double)> eval;
    double blowup_margin = 1.0;
};

/// Result of checking the structural conditions
///   (g1)  g(r) -> +infinity as r -> 0+   (checked as g(1e-12) > g(1) + margin)
///   (g2)  g nonincreasing on (0, infinity)
/// on a geometric sample grid.  When (g2) fails, `witness` holds a pair
/// r1 < r2 with g(r1) < g(r2).
struct G1G2Report {
    bool g1_ok = false;
    bool g2_ok = false;
    std::size_t samples = 0;
    std::optional<std::pair<double, double>> witness;
};

/// Sample `samples` points geometrically spaced on [1e-12, 1e6] and test
/// (g1)/(g2).  samples must be >= 2.
G1G2Report verify_g1_g2(const GeneralRHS& g, std::size_t samples);

}  // namespace fracsing
