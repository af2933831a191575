#include "fracsing/geometry.hpp"

#include <cmath>

namespace fracsing {

Domain make_interval(double length) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("make_interval: length must be positive and finite, got " +
                                    std::to_string(length));
    Domain d;
    d.kind = Domain::Kind::interval;
    d.lengths = {length};
    return d;
}

Domain make_rectangle(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw std::invalid_argument("make_rectangle: side lengths must be positive and finite");
    Domain d;
    d.kind = Domain::Kind::rectangle;
    d.lengths = {lx, ly};
    return d;
}

namespace {

GridAxis make_axis(double length, std::size_t n) {
    if (n < 3)
        throw std::invalid_argument("make_grid: need at least 3 nodes per axis, got " +
                                    std::to_string(n));
    GridAxis a;
    a.n = n;
    a.length = length;
    a.h = length / static_cast<double>(n - 1);
    a.nodes.resize(n);
    a.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        a.nodes[j] = length * static_cast<double>(j) / static_cast<double>(n - 1);
        a.weights[j] = (j == 0 || j == n - 1) ? 0.5 * a.h : a.h;
    }
    return a;
}

}  // namespace

double Grid::weight(std::size_t m) const {
    double w = 1.0;
    for (const auto& a : axes) {
        w *= a.weights[m % a.n];
        m /= a.n;
    }
    return w;
}

bool Grid::is_boundary(std::size_t m) const {
    for (const auto& a : axes) {
        std::size_t j = m % a.n;
        if (j == 0 || j == a.n - 1) return true;
        m /= a.n;
    }
    return false;
}

std::vector<double> Grid::coords(std::size_t m) const {
    std::vector<double> x(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) {
        x[d] = axes[d].nodes[m % axes[d].n];
        m /= axes[d].n;
    }
    return x;
}

bool Grid::same_shape(const Grid& other) const {
    if (domain.kind != other.domain.kind || axes.size() != other.axes.size()) return false;
    for (std::size_t d = 0; d < axes.size(); ++d)
        if (axes[d].n != other.axes[d].n || axes[d].length != other.axes[d].length) return false;
    return true;
}

Grid make_grid(const Domain& domain, const std::vector<std::size_t>& nodes_per_axis) {
    if (nodes_per_axis.size() != domain.dim())
        throw std::invalid_argument("make_grid: got " + std::to_string(nodes_per_axis.size()) +
                                    " node counts for a " + std::to_string(domain.dim()) +
                                    "-dimensional domain");
    for (double L : domain.lengths)
        if (!(L > 0.0)) throw std::invalid_argument("make_grid: domain lengths must be positive");

    Grid g;
    g.domain = domain;
    for (std::size_t d = 0; d < domain.dim(); ++d)
        g.axes.push_back(make_axis(domain.lengths[d], nodes_per_axis[d]));

    // Quadrature sanity: weights must reproduce the domain measure.
    double wsum = 0.0;
    for (std::size_t m = 0; m < g.total_nodes(); ++m) wsum += g.weight(m);
    const double measure = domain.measure();
    if (std::abs(wsum - measure) > 1e-12 * measure)
        throw std::logic_error("make_grid: quadrature weights do not sum to the domain measure");

    return g;
}

}  // namespace fracsing
