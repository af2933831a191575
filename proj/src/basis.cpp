#include "fracsing/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracsing {

double sin_pi_ratio(long long num, long long den) {
    // sin(pi*num/den) is 2*den-periodic in num; reduce in exact integer
    // arithmetic, then fold into [0, den/2] where sin is evaluated directly.
    long long r = num % (2 * den);
    if (r < 0) r += 2 * den;
    double sign = 1.0;
    if (r >= den) {
        r -= den;
        sign = -1.0;
    }
    if (2 * r > den) r = den - r;
    return sign * std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

namespace {

struct Candidate {
    double lambda;
    std::size_t jx;
    std::size_t jy;  // 0 in 1-D
};

// Nodal samples of the axis mode k on axis a, normalized to unit L2 norm on
// (0, length).  Boundary samples are set to exact zeros.
std::vector<double> axis_mode(const GridAxis& a, std::size_t k) {
    const auto M = static_cast<long long>(a.n - 1);
    std::vector<double> v(a.n);
    const double scale = std::sqrt(2.0 / a.length);
    v[0] = 0.0;
    v[a.n - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < a.n; ++j)
        v[j] = scale * sin_pi_ratio(static_cast<long long>(k) * static_cast<long long>(j), M);
    return v;
}

double axis_eigenvalue(const GridAxis& a, std::size_t k) {
    const double w = static_cast<double>(k) * std::numbers::pi / a.length;
    return w * w;
}

}  // namespace

EigenBasis::EigenBasis(Grid grid, std::size_t n_modes) : grid_(std::move(grid)), n_modes_(n_modes) {
    if (n_modes_ == 0) throw std::invalid_argument("EigenBasis: n_modes must be >= 1");
    n_nodes_ = grid_.total_nodes();

    std::vector<Candidate> cand;
    if (grid_.domain.kind == Domain::Kind::interval) {
        cand.reserve(n_modes_);
        for (std::size_t k = 1; k <= n_modes_; ++k)
            cand.push_back({axis_eigenvalue(grid_.axes[0], k), k, 0});
    } else {
        // Any mode among the n_modes smallest has both indices <= n_modes
        // (fixing one index, the eigenvalue is strictly increasing in the
        // other), so this candidate square always suffices.
        cand.reserve(n_modes_ * n_modes_);
        for (std::size_t j = 1; j <= n_modes_; ++j)
            for (std::size_t k = 1; k <= n_modes_; ++k)
                cand.push_back(
                    {axis_eigenvalue(grid_.axes[0], j) + axis_eigenvalue(grid_.axes[1], k), j, k});
        std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
            if (a.lambda != b.lambda) return a.lambda < b.lambda;
            if (a.jx != b.jx) return a.jx < b.jx;
            return a.jy < b.jy;
        });
        cand.resize(n_modes_);
    }

    eigenvalues_.reserve(n_modes_);
    indices_.reserve(n_modes_);
    for (const auto& c : cand) {
        eigenvalues_.push_back(c.lambda);
        indices_.push_back({c.jx, c.jy});
        max_index_[0] = std::max(max_index_[0], c.jx);
        max_index_[1] = std::max(max_index_[1], c.jy);
    }

    // Resolution bound: at least 4 nodes per largest per-axis mode index,
    // otherwise the top modes are unresolved by the quadrature.
    for (std::size_t d = 0; d < grid_.axes.size(); ++d) {
        const std::size_t need = 4 * max_index_[d];
        if (grid_.axes[d].n < need)
            throw std::invalid_argument(
                "build_basis: axis " + std::to_string(d) + " has " +
                std::to_string(grid_.axes[d].n) + " nodes but the requested modes need >= " +
                std::to_string(need) + "; increase the grid or reduce n_modes");
    }

    // Sample the modes.  1-D axis tables first, then tensor products.
    phi_.assign(n_modes_ * n_nodes_, 0.0);
    if (grid_.domain.kind == Domain::Kind::interval) {
        for (std::size_t i = 0; i < n_modes_; ++i) {
            auto v = axis_mode(grid_.axes[0], indices_[i][0]);
            std::copy(v.begin(), v.end(), phi_.begin() + i * n_nodes_);
        }
    } else {
        const std::size_t nx = grid_.axes[0].n;
        const std::size_t ny = grid_.axes[1].n;
        std::vector<std::vector<double>> tx(max_index_[0] + 1), ty(max_index_[1] + 1);
        for (std::size_t k = 1; k <= max_index_[0]; ++k) tx[k] = axis_mode(grid_.axes[0], k);
        for (std::size_t k = 1; k <= max_index_[1]; ++k) ty[k] = axis_mode(grid_.axes[1], k);
        for (std::size_t i = 0; i < n_modes_; ++i) {
            const auto& vx = tx[indices_[i][0]];
            const auto& vy = ty[indices_[i][1]];
            double* row = phi_.data() + i * n_nodes_;
            for (std::size_t iy = 0; iy < ny; ++iy) {
                const double fy = vy[iy];
                double* out = row + iy * nx;
                for (std::size_t ix = 0; ix < nx; ++ix) out[ix] = fy * vx[ix];
            }
        }
    }

    wq_.resize(n_nodes_);
    for (std::size_t m = 0; m < n_nodes_; ++m)
        wq_[m] = grid_.is_boundary(m) ? 0.0 : grid_.weight(m);
}

double EigenBasis::mode_at(std::size_t i, const std::vector<double>& x) const {
    if (i >= n_modes_) throw std::out_of_range("EigenBasis::mode_at: mode index out of range");
    if (x.size() != grid_.axes.size())
        throw std::invalid_argument("EigenBasis::mode_at: point dimension mismatch");
    double v = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double L = grid_.axes[d].length;
        v *= std::sqrt(2.0 / L) *
             std::sin(static_cast<double>(indices_[i][d]) * std::numbers::pi * x[d] / L);
    }
    return v;
}

std::shared_ptr<const EigenBasis> build_basis(const Grid& grid, std::size_t n_modes) {
    return std::make_shared<const EigenBasis>(grid, n_modes);
}

SpectralField analyze(const EigenBasis& basis, const GridField& f) {
    if (f.values.size() != basis.n_nodes())
        throw std::invalid_argument("analyze: field has " + std::to_string(f.values.size()) +
                                    " nodes, basis grid has " + std::to_string(basis.n_nodes()));
    if (f.grid && !f.grid->same_shape(basis.grid()))
        throw std::invalid_argument("analyze: field grid does not match the basis grid");

    const std::size_t M = basis.n_nodes();
    const auto& w = basis.interior_quad_weights();
    std::vector<double> wf(M);
    for (std::size_t m = 0; m < M; ++m) wf[m] = w[m] * f.values[m];

    SpectralField c;
    c.basis = &basis;
    c.coeffs.resize(basis.n_modes());
    for (std::size_t i = 0; i < basis.n_modes(); ++i) {
        const double* row = basis.mode(i);
        double acc = 0.0;
        for (std::size_t m = 0; m < M; ++m) acc += wf[m] * row[m];
        c.coeffs[i] = acc;
    }
    return c;
}

GridField synthesize(const EigenBasis& basis, const SpectralField& c) {
    if (c.coeffs.size() > basis.n_modes())
        throw std::invalid_argument("synthesize: coefficient vector longer than basis");
    if (c.basis && c.basis != &basis)
        throw std::invalid_argument("synthesize: coefficients belong to a different basis");

    const std::size_t M = basis.n_nodes();
    GridField u;
    u.grid = &basis.grid();
    u.values.assign(M, 0.0);
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        const double ci = c.coeffs[i];
        if (ci == 0.0) continue;
        const double* row = basis.mode(i);
        double* out = u.values.data();
        for (std::size_t m = 0; m < M; ++m) out[m] += ci * row[m];
    }
    return u;
}

double inner_product(const EigenBasis& basis, const std::vector<double>& a,
                     const std::vector<double>& b) {
    if (a.size() != basis.n_nodes() || b.size() != basis.n_nodes())
        throw std::invalid_argument("inner_product: size mismatch with basis grid");
    const auto& w = basis.interior_quad_weights();
    double acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += w[m] * a[m] * b[m];
    return acc;
}

double project_mode(const EigenBasis& basis, const std::vector<double>& f, std::size_t j) {
    if (j >= basis.n_modes()) throw std::out_of_range("project_mode: mode index out of range");
    if (f.size() != basis.n_nodes())
        throw std::invalid_argument("project_mode: size mismatch with basis grid");
    const auto& w = basis.interior_quad_weights();
    const double* row = basis.mode(j);
    double acc = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) acc += w[m] * f[m] * row[m];
    return acc;
}

}  // namespace fracsing
