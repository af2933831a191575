#pragma once

#include <cstddef>
#include <vector>

#include "fracsing/basis.hpp"
#include "fracsing/field.hpp"

namespace fracsing {

/// Exponent pair of the problem (-Lap)^s u = u^(-p).
///  - s in (0,1]: fractional order; s = 1 is the classical Laplacian and is
///    kept as an oracle mode for cross-checks against finite differences.
///  - p in (0,1): strength of the singular right-hand side.
struct FracExponent {
    double s = 0.5;
    double p = 0.5;
};

/// Validate s (throws std::invalid_argument outside (0,1]).
void check_order(double s);

/// Spectral fractional Laplacian: coefficient i of the result is
/// lambda_i^s * c_i.  Diagonal in the eigenbasis, hence exact up to the
/// floating-point pow.
SpectralField apply_fractional(const EigenBasis& basis, const SpectralField& c, double s);

/// Solve ((-Lap)^s + mu) u = h for the coefficients of u:
/// u_i = h_i / (lambda_i^s + mu).  Requires mu >= 0; with mu = 0 this is the
/// plain fractional solve (well-posed since lambda_1 > 0 on a bounded
/// domain).
SpectralField solve_shifted(const EigenBasis& basis, const SpectralField& h, double s, double mu);

/// Homogeneous Sobolev norm of the truncated expansion:
/// sqrt(sum_i lambda_i^s c_i^2).
double hs_norm(const EigenBasis& basis, const SpectralField& c, double s);

/// Weak residual of (-Lap)^s u = rhs against the first m eigenmodes:
/// entry j = lambda_j^s u_j - <rhs, phi_j>, with u_j = analyze(u) and the
/// inner product taken over interior nodes only (rhs may blow up at the
/// wall and is never evaluated there).  Throws if rhs is non-finite at an
/// interior node or m exceeds the basis size.
std::vector<double> weak_residual(const EigenBasis& basis, const GridField& u,
                                  const GridField& rhs, double s, std::size_t m);

/// Precomputed diagonal lambda_i^s for a fixed (basis, s); the iteration
/// hot path reuses this instead of calling pow per sweep.
std::vector<double> fractional_symbol(const EigenBasis& basis, double s);

}  // namespace fracsing
