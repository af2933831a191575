#include "fracsing/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracsing/geometry.hpp"

namespace fracsing {

double sup_norm(const GridField& f) {
    double s = 0.0;
    for (double v : f.values) s = std::max(s, std::abs(v));
    return s;
}

double sup_diff(const GridField& a, const GridField& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("sup_diff: field sizes differ");
    double s = 0.0;
    for (std::size_t m = 0; m < a.values.size(); ++m)
        s = std::max(s, std::abs(a.values[m] - b.values[m]));
    return s;
}

double min_interior(const GridField& f) {
    if (!f.grid) throw std::invalid_argument("min_interior: field has no grid");
    if (f.values.size() != f.grid->total_nodes())
        throw std::invalid_argument("min_interior: field size does not match its grid");
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < f.values.size(); ++m)
        if (!f.grid->is_boundary(m)) lo = std::min(lo, f.values[m]);
    return lo;
}

}  // namespace fracsing
