#include "sparsedom/localnorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparsedom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// inclusive in-domain cell ranges of a box, empty signaled via first > last
struct CellRect {
    Index x0, x1, y0, y1;
    bool empty;
};

CellRect clip(const Box& b, int dim, Index n) {
    CellRect r{0, 0, 0, 0, false};
    auto [x0, x1] = b.cell_range(0);
    r.x0 = std::max<Index>(x0, 0);
    r.x1 = std::min<Index>(x1, n - 1);
    if (dim == 2) {
        auto [y0, y1] = b.cell_range(1);
        r.y0 = std::max<Index>(y0, 0);
        r.y1 = std::min<Index>(y1, n - 1);
    }
    r.empty = r.x1 < r.x0 || r.y1 < r.y0;
    return r;
}

}  // namespace

StoppedFunction::StoppedFunction(GridFunction h_, StoppingCollection c)
    : h(std::move(h_)), collection(std::move(c)) {
    if (h.dim != collection.top.dim) throw std::invalid_argument("StoppedFunction: dim mismatch");
    const Box triple = dilate(collection.top, 3.0);
    for (Index y = 0; y < (h.dim == 2 ? h.n : 1); ++y)
        for (Index x = 0; x < h.n; ++x)
            if (h.at(x, y) != 0.0 && !triple.contains_cell(x, y))
                throw std::invalid_argument("StoppedFunction: support escapes 3*top");
}

double y_norm(const StoppedFunction& sf, double p, int* dropped_hats) {
    if (dropped_hats) *dropped_hats = 0;
    auto it = sf.y_cache.find(p);
    if (it != sf.y_cache.end() && !dropped_hats) return it->second;

    const GridFunction& h = sf.h;
    if (std::isinf(p)) {
        const double v = lp_norm(h, kInf);
        sf.y_cache[p] = v;
        return v;
    }

    double off_shadow = 0.0;
    const Mask& sh = sf.collection.shadow;
    for (Index y = 0; y < (h.dim == 2 ? h.n : 1); ++y)
        for (Index x = 0; x < h.n; ++x)
            if (!sh.get(x, y)) off_shadow = std::max(off_shadow, std::abs(h.at(x, y)));

    double hat_term = 0.0;
    if (!sf.collection.members.empty()) {
        const GridFunction M = maximal_function(h, p);
        for (const Cube& L : sf.collection.members) {
            const CellRect r = clip(dilate(L, 32.0), h.dim, h.n);
            if (r.empty) {
                if (dropped_hats) ++*dropped_hats;
                continue;
            }
            double inf_hat = kInf;
            for (Index y = r.y0; y <= r.y1; ++y)
                for (Index x = r.x0; x <= r.x1; ++x) inf_hat = std::min(inf_hat, M.at(x, y));
            hat_term = std::max(hat_term, inf_hat);
        }
    }
    const double v = std::max(off_shadow, hat_term);
    sf.y_cache[p] = v;
    return v;
}

GridFunction BadFunction::sum(int dim, int extent) const {
    GridFunction s(dim, extent, 0.0);
    for (const auto& piece : pieces)
        for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += piece.b.values[i];
    return s;
}

bool BadFunction::valid(double tol_scale) const {
    for (const auto& piece : pieces) {
        const Box box = piece.L.box();
        double mass = 0.0, l1 = 0.0;
        for (Index y = 0; y < (piece.b.dim == 2 ? piece.b.n : 1); ++y)
            for (Index x = 0; x < piece.b.n; ++x) {
                const double v = piece.b.at(x, y);
                if (v != 0.0 && !box.contains_cell(x, y)) return false;
                mass += v;
                l1 += std::abs(v);
            }
        if (mean_zero && std::abs(mass) > tol_scale * std::max(l1, 1.0)) return false;
    }
    return true;
}

CzDecomposition cz_decompose(const StoppedFunction& sf, double p) {
    const GridFunction& h = sf.h;
    CzDecomposition out;
    out.g = h;
    out.b.mean_zero = true;

    for (const Cube& L : sf.collection.members) {
        const CellRect r = clip(L.box(), h.dim, h.n);
        if (r.empty) continue;
        double mass = 0.0;
        Index cells = 0;
        for (Index y = r.y0; y <= r.y1; ++y)
            for (Index x = r.x0; x <= r.x1; ++x) {
                mass += h.at(x, y);
                ++cells;
            }
        const double mean = mass / static_cast<double>(cells);
        GridFunction bl(h.dim, h.extent, 0.0);
        for (Index y = r.y0; y <= r.y1; ++y)
            for (Index x = r.x0; x <= r.x1; ++x) {
                bl.at(x, y) = h.at(x, y) - mean;
                out.g.at(x, y) = mean;
            }
        out.b.pieces.push_back(BadPiece{L, std::move(bl)});
    }

    out.y_h = y_norm(sf, p);
    out.g_sup = lp_norm(out.g, kInf);
    StoppedFunction bsf(out.b.sum(h.dim, h.extent), sf.collection);
    out.b_norm = y_norm(bsf, p);
    const double cd = std::pow(2.0, 5.0 * h.dim);
    out.g_bound_ok = out.g_sup <= cd * out.y_h * (1.0 + 1e-12);
    out.b_bound_ok = out.b_norm <= 2.0 * cd * out.y_h * (1.0 + 1e-12);
    return out;
}

double orlicz_lorentz_norm(const SphericalFunction& omega, double q) {
    if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("q must lie in [1, inf)");
    std::vector<double> a;
    a.reserve(omega.values.size());
    for (double v : omega.values) a.push_back(std::abs(v));
    std::sort(a.begin(), a.end());
    const double mu = omega.cell_measure();
    // F' (t) = log(e + t)
    auto F = [](double t) { return (std::numbers::e + t) * std::log(std::numbers::e + t) - t; };
    double norm = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] <= prev) continue;
        // on (prev, a[i]] the distribution function is mu * (count of samples > prev)
        const double lambda = mu * static_cast<double>(a.size() - i);
        norm += std::pow(lambda, 1.0 / q) * (F(a[i]) - F(prev));
        prev = a[i];
    }
    return q * norm;
}

double sphere_lq_norm(const SphericalFunction& omega, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : omega.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : omega.values) acc += std::pow(std::abs(v), q);
    return std::pow(acc * omega.cell_measure(), 1.0 / q);
}

}  // namespace sparsedom
