#include "fracsing/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsing {

void check_order(double s) {
    if (!(s > 0.0) || !(s <= 1.0) || !std::isfinite(s))
        throw std::invalid_argument("fractional order s must lie in (0,1], got " +
                                    std::to_string(s));
}

std::vector<double> fractional_symbol(const EigenBasis& basis, double s) {
    check_order(s);
    std::vector<double> d(basis.n_modes());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::pow(basis.eigenvalues()[i], s);
    return d;
}

SpectralField apply_fractional(const EigenBasis& basis, const SpectralField& c, double s) {
    check_order(s);
    if (c.coeffs.size() > basis.n_modes())
        throw std::invalid_argument("apply_fractional: coefficient vector longer than basis");
    SpectralField out;
    out.basis = &basis;
    out.coeffs.resize(c.coeffs.size());
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        out.coeffs[i] = std::pow(basis.eigenvalues()[i], s) * c.coeffs[i];
    return out;
}

SpectralField solve_shifted(const EigenBasis& basis, const SpectralField& h, double s, double mu) {
    check_order(s);
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("solve_shifted: shift mu must be finite and >= 0");
    if (h.coeffs.size() > basis.n_modes())
        throw std::invalid_argument("solve_shifted: coefficient vector longer than basis");
    SpectralField out;
    out.basis = &basis;
    out.coeffs.resize(h.coeffs.size());
    for (std::size_t i = 0; i < h.coeffs.size(); ++i)
        out.coeffs[i] = h.coeffs[i] / (std::pow(basis.eigenvalues()[i], s) + mu);
    return out;
}

double hs_norm(const EigenBasis& basis, const SpectralField& c, double s) {
    check_order(s);
    if (c.coeffs.size() > basis.n_modes())
        throw std::invalid_argument("hs_norm: coefficient vector longer than basis");
    double acc = 0.0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        acc += std::pow(basis.eigenvalues()[i], s) * c.coeffs[i] * c.coeffs[i];
    return std::sqrt(acc);
}

std::vector<double> weak_residual(const EigenBasis& basis, const GridField& u,
                                  const GridField& rhs, double s, std::size_t m) {
    check_order(s);
    if (m == 0 || m > basis.n_modes())
        throw std::invalid_argument("weak_residual: test-mode count m must be in [1, n_modes]");
    if (rhs.values.size() != basis.n_nodes())
        throw std::invalid_argument("weak_residual: rhs size mismatch with basis grid");
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        if (!basis.grid().is_boundary(i) && !std::isfinite(rhs.values[i]))
            throw std::invalid_argument("weak_residual: rhs is non-finite at interior node " +
                                        std::to_string(i));

    const SpectralField cu = analyze(basis, u);
    std::vector<double> r(m);
    for (std::size_t j = 0; j < m; ++j)
        r[j] = std::pow(basis.eigenvalues()[j], s) * cu.coeffs[j] -
               project_mode(basis, rhs.values, j);
    return r;
}

}  // namespace fracsing
