#pragma once

#include <cstddef>
#include <vector>

namespace fracsing {

struct Grid;
class EigenBasis;

/// Nodal samples of a function on a Grid, in the grid's flat node order.
/// Fields represent members of H^s_0, so boundary entries are identically
/// zero for anything produced by the library.
struct GridField {
    const Grid* grid = nullptr;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t m) { return values[m]; }
    double operator[](std::size_t m) const { return values[m]; }
};

/// Coefficient vector against an EigenBasis (possibly shorter than the
/// basis mode count; missing trailing coefficients mean zero).
struct SpectralField {
    const EigenBasis* basis = nullptr;
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }
};

/// sup-norm over all nodes.
double sup_norm(const GridField& f);

/// sup-norm of the nodewise difference (fields must be same length).
double sup_diff(const GridField& a, const GridField& b);

/// Minimum of f over interior (non-boundary) nodes.
double min_interior(const GridField& f);

}  // namespace fracsing
