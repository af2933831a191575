#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsing {

/// Bounded tensor-product domain: an interval (0,L) or an axis-aligned
/// rectangle (0,Lx) x (0,Ly).  These are the domains on which the Dirichlet
/// eigenpairs are known in closed form, which is what the whole solver
/// builds on.
struct Domain {
    enum class Kind { interval, rectangle };

    Kind kind = Kind::interval;
    std::vector<double> lengths;  // one entry per axis, all > 0

    std::size_t dim() const { return lengths.size(); }
    double measure() const {
        double m = 1.0;
        for (double L : lengths) m *= L;
        return m;
    }
};

/// Make an interval domain (0, length).  Throws std::invalid_argument on
/// non-positive length.
Domain make_interval(double length);

/// Make a rectangle domain (0,lx) x (0,ly).
Domain make_rectangle(double lx, double ly);

/// One grid axis: n uniformly spaced nodes including both boundary nodes,
/// x_j = j*h with h = length/(n-1), plus composite-trapezoid weights
/// (h/2 at the ends, h inside).
struct GridAxis {
    std::size_t n = 0;
    double length = 0.0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Uniform tensor grid over a Domain.  Node ordering is x-fastest:
/// for a rectangle, flat index m = iy*nx + ix.  Boundary nodes are part of
/// the grid; every field that lives here is zero on them.
struct Grid {
    Domain domain;
    std::vector<GridAxis> axes;

    std::size_t total_nodes() const {
        std::size_t t = 1;
        for (const auto& a : axes) t *= a.n;
        return t;
    }

    /// Tensor-product quadrature weight of flat node m.
    double weight(std::size_t m) const;

    /// True if flat node m touches the boundary on any axis.
    bool is_boundary(std::size_t m) const;

    /// Coordinates of flat node m (size = dim).
    std::vector<double> coords(std::size_t m) const;

    /// Structural equality: same kind, lengths and node counts.
    bool same_shape(const Grid& other) const;
};

/// Build the uniform grid.  nodes_per_axis must match the domain dimension
/// and every count must be >= 3 (two boundary nodes plus at least one
/// interior node).  The trapezoid weights sum to the domain measure exactly
/// up to roundoff; this is asserted at build time (1e-12 relative).
Grid make_grid(const Domain& domain, const std::vector<std::size_t>& nodes_per_axis);

}  // namespace fracsing
