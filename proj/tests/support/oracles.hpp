#pragma once

// Independent reference computations the tests compare the library against.
// Everything in here is deliberately implemented from scratch (finite
// differences, direct series, textbook special functions) so that agreement
// with the spectral pipeline is meaningful.

#include <cstddef>
#include <vector>

namespace oracles {

// Thomas algorithm for a tridiagonal system; lower/upper have n-1 entries.
std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs);

// Damped Newton on the uniform-grid finite-difference discretization of
//   -u'' = (eps + u)^(-p) on (0, L), u(0) = u(L) = 0,
// n nodes including the boundary.  Returns nodal values; residual is driven
// to 1e-12 sup-norm.
std::vector<double> fd_newton_singular(double length, std::size_t n, double eps, double p);

// Plain Picard iteration u <- (-Lap)^(-s) g(u) built on its own sine sums
// and trapezoid weights (no shift, no bracketing).  Valid when the Lipschitz
// constant of g at 0 is below lambda_1^s; used as an independent fixed-point
// oracle for the regularized problem.
std::vector<double> picard_fixed_point(double length, std::size_t n, std::size_t modes,
                                       double s, double eps, double p, double tol,
                                       std::size_t max_iters);

// Coefficient of the constant function 1 against the unit-L2 sine mode k on
// (0, L): sqrt(2/L) * (L/(k pi)) * (1 - cos(k pi)).
double constant_mode_coefficient(std::size_t k, double length);

// Trapezoid projection of the constant 1 on the same interior rule the
// library uses, summed with long-double trig: the discrete counterpart of
// constant_mode_coefficient.
double constant_mode_coefficient_discrete(std::size_t k, double length, std::size_t n);

// u(L/2) for the half-Laplacian torsion problem (-Lap)^(1/2) u = 1 on (0, pi):
// the alternating series (4/pi) * sum_j (-1)^j / (2j+1)^2, summed in pairs.
double half_laplacian_torsion_midpoint();

// Extension profile from the modified Bessel function:
//   theta(y) = (2 / Gamma(s)) * (sqrt(lambda) y / 2)^s * K_s(sqrt(lambda) y),
// normalized to theta(0) = 1; at s = 1/2 this is exp(-sqrt(lambda) y).
double bessel_profile(double lambda, double s, double y);

}  // namespace oracles
