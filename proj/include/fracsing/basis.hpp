#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "fracsing/field.hpp"
#include "fracsing/geometry.hpp"

namespace fracsing {

/// Truncated Dirichlet eigenbasis of -Laplacian on a tensor-product domain.
///
/// On an interval (0,L) the eigenpairs are analytic:
///   lambda_k = (k pi / L)^2,   phi_k(x) = sqrt(2/L) sin(k pi x / L).
/// On a rectangle the modes are products of the axis modes, enumerated in
/// nondecreasing eigenvalue order with ties broken lexicographically by the
/// index pair (j,k).  Mode samples are stored densely (one row per mode) and
/// are exactly zero on boundary nodes.
///
/// Instances are immutable after construction and safe to share between
/// concurrent solves.
class EigenBasis {
  public:
    EigenBasis(Grid grid, std::size_t n_modes);

    const Grid& grid() const { return grid_; }
    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_nodes() const { return n_nodes_; }

    /// Eigenvalues of -Laplacian, nondecreasing, eigenvalues()[0] > 0.
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(std::size_t i) const { return eigenvalues_.at(i); }

    /// Per-axis integer mode indices of mode i (second entry 0 in 1-D).
    const std::vector<std::array<std::size_t, 2>>& mode_indices() const { return indices_; }

    /// Nodal samples of mode i (length n_nodes, grid flat order).
    const double* mode(std::size_t i) const { return phi_.data() + i * n_nodes_; }

    /// Largest per-axis mode index actually used, per axis.
    std::array<std::size_t, 2> max_axis_index() const { return max_index_; }

    /// Evaluate mode i at an arbitrary point inside the domain.
    double mode_at(std::size_t i, const std::vector<double>& x) const;

    /// Grid quadrature weights with boundary entries zeroed.  Every inner
    /// product in the library uses these, so all quadratures agree exactly
    /// and singular boundary data is never touched.
    const std::vector<double>& interior_quad_weights() const { return wq_; }

  private:
    Grid grid_;
    std::size_t n_modes_ = 0;
    std::size_t n_nodes_ = 0;
    std::vector<double> eigenvalues_;
    std::vector<std::array<std::size_t, 2>> indices_;
    std::array<std::size_t, 2> max_index_ = {0, 0};
    std::vector<double> phi_;  // n_modes x n_nodes, row-major
    std::vector<double> wq_;   // interior quadrature weights (0 on boundary)
};

/// Build the basis on the given grid.
///
/// Preconditions enforced here:
///  - n_modes >= 1;
///  - resolution bound: every axis must carry at least 4 nodes per largest
///    mode index on that axis (nodes_per_axis >= 4 * max_index), otherwise
///    the highest modes are unresolved and quadrature orthonormality degrades.
/// Throws std::invalid_argument when violated.
std::shared_ptr<const EigenBasis> build_basis(const Grid& grid, std::size_t n_modes);

/// Quadrature projection: coefficients c_i = <f, phi_i> with the grid's
/// trapezoid weights.  Throws on grid mismatch between f and basis.
SpectralField analyze(const EigenBasis& basis, const GridField& f);

/// Evaluate sum_i c_i phi_i on the grid nodes.  Coefficient vectors shorter
/// than the basis are zero-padded; longer ones are rejected.  The result is
/// exactly zero on boundary nodes.
GridField synthesize(const EigenBasis& basis, const SpectralField& c);

/// Inner product <a, b> under the grid quadrature, summed over interior
/// nodes only (boundary values never contribute; admissible fields vanish
/// there anyway).
double inner_product(const EigenBasis& basis, const std::vector<double>& a,
                     const std::vector<double>& b);

/// <f, phi_j> for a single mode (j is the 0-based basis position, like
/// mode(j) and eigenvalue(j)), interior-node quadrature.  The first and
/// last cells on each axis are integrated one-sidedly: only the interior
/// endpoint of the cell enters (the integrand vanishes at the wall for every
/// admissible field, and singular right-hand sides are never evaluated
/// there).
double project_mode(const EigenBasis& basis, const std::vector<double>& f, std::size_t j);

/// sin(pi * num / den) evaluated with the argument reduced exactly in
/// integer arithmetic first; accurate to ~1 ulp even for num >> den.
double sin_pi_ratio(long long num, long long den);

}  // namespace fracsing
