#include "fracsing/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsing {

namespace {

void check_exponents(const SingularRHS& g) {
    if (!(g.p > 0.0) || !(g.p < 1.0))
        throw std::invalid_argument("SingularRHS: p must lie in (0,1), got " +
                                    std::to_string(g.p));
    if (!(g.eps >= 0.0) || !std::isfinite(g.eps))
        throw std::invalid_argument("SingularRHS: eps must be finite and >= 0");
}

}  // namespace

double eval_g(const SingularRHS& g, double r) {
    check_exponents(g);
    const double rc = r > 0.0 ? r : 0.0;
    const double base = g.eps + rc;
    if (base <= 0.0)
        throw std::domain_error("eval_g: singular evaluation, eps = 0 and r <= 0");
    return std::pow(base, -g.p);
}

std::vector<double> eval_g(const SingularRHS& g, const std::vector<double>& r) {
    check_exponents(g);
    std::vector<double> out(r.size());
    for (std::size_t m = 0; m < r.size(); ++m) {
        const double rc = r[m] > 0.0 ? r[m] : 0.0;
        const double base = g.eps + rc;
        if (base <= 0.0)
            throw std::domain_error("eval_g: singular evaluation, eps = 0 and r <= 0 at node " +
                                    std::to_string(m));
        out[m] = std::pow(base, -g.p);
    }
    return out;
}

double lipschitz_bound(const SingularRHS& g, double lower) {
    check_exponents(g);
    const double base = g.eps + lower;
    if (base <= 0.0)
        throw std::domain_error("lipschitz_bound: eps + lower must be positive, got " +
                                std::to_string(base));
    return g.p * std::pow(base, -(g.p + 1.0));
}

G1G2Report verify_g1_g2(const GeneralRHS& g, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("verify_g1_g2: need at least 2 samples");
    if (!g.eval) throw std::invalid_argument("verify_g1_g2: missing eval rule");

    constexpr double r_lo = 1e-12;
    constexpr double r_hi = 1e6;
    const double step = std::log(r_hi / r_lo) / static_cast<double>(samples - 1);

    G1G2Report rep;
    rep.samples = samples;
    rep.g2_ok = true;

    double prev_r = 0.0;
    double prev_v = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = r_lo * std::exp(step * static_cast<double>(i));
        const double v = g.eval(r);
        if (!std::isfinite(v))
            throw std::domain_error("verify_g1_g2: g non-finite at r = " + std::to_string(r));
        if (i > 0 && v > prev_v && rep.g2_ok) {
            rep.g2_ok = false;
            rep.witness = std::make_pair(prev_r, r);
        }
        prev_r = r;
        prev_v = v;
    }

    rep.g1_ok = g.eval(r_lo) > g.eval(1.0) + g.blowup_margin;
    return rep;
}

}  // namespace fracsing
