#include "sparsedom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sparsedom {

namespace {

bool is_inf(double p) { return std::isinf(p); }

void check_exponent(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("exponent p must satisfy p >= 1");
}

// out[i] = max(a[i .. i+w-1]), i = 0 .. a.size()-w
std::vector<double> sliding_max(const std::vector<double>& a, Index w) {
    const Index len = static_cast<Index>(a.size());
    std::vector<double> out(static_cast<std::size_t>(len - w + 1));
    std::deque<Index> dq;
    for (Index i = 0; i < len; ++i) {
        while (!dq.empty() && a[static_cast<std::size_t>(dq.back())] <= a[static_cast<std::size_t>(i)])
            dq.pop_back();
        dq.push_back(i);
        if (dq.front() <= i - w) dq.pop_front();
        if (i >= w - 1) out[static_cast<std::size_t>(i - w + 1)] = a[static_cast<std::size_t>(dq.front())];
    }
    return out;
}

}  // namespace

GridFunction::GridFunction(int dim_, int extent_, double fill) : dim(dim_), extent(extent_) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("GridFunction: dim must be 1 or 2");
    if (extent < 0) throw std::invalid_argument("GridFunction: negative extent");
    n = Index{1} << extent;
    values.assign(static_cast<std::size_t>(dim == 1 ? n : n * n), fill);
}

bool GridFunction::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

Mask::Mask(int dim_, int extent_) : dim(dim_), extent(extent_) {
    n = Index{1} << extent;
    bits.assign(static_cast<std::size_t>(dim == 1 ? n : n * n), 0);
}

Index Mask::count() const {
    Index c = 0;
    for (auto b : bits) c += b;
    return c;
}

Index mask_count_in_box(const Mask& m, const Box& b) {
    auto [x0, x1] = b.cell_range(0);
    x0 = std::max<Index>(x0, 0);
    x1 = std::min<Index>(x1, m.n - 1);
    Index c = 0;
    if (m.dim == 1) {
        for (Index x = x0; x <= x1; ++x) c += m.get(x) ? 1 : 0;
        return c;
    }
    auto [y0, y1] = b.cell_range(1);
    y0 = std::max<Index>(y0, 0);
    y1 = std::min<Index>(y1, m.n - 1);
    for (Index y = y0; y <= y1; ++y)
        for (Index x = x0; x <= x1; ++x) c += m.get(x, y) ? 1 : 0;
    return c;
}

Index domain_cells_in_box(int dim, Index n, const Box& b) {
    Index c = 1;
    for (int a = 0; a < dim; ++a) {
        auto [lo, hi] = b.cell_range(a);
        lo = std::max<Index>(lo, 0);
        hi = std::min<Index>(hi, n - 1);
        if (hi < lo) return 0;
        c *= hi - lo + 1;
    }
    return c;
}

double lp_norm(const GridFunction& f, double p) {
    check_exponent(p);
    if (is_inf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

double average(const GridFunction& f, double p, const Box& q) {
    check_exponent(p);
    if (q.volume() <= 0.0) throw std::invalid_argument("average: degenerate box");
    auto [x0, x1] = q.cell_range(0);
    x0 = std::max<Index>(x0, 0);
    x1 = std::min<Index>(x1, f.n - 1);
    Index y0 = 0, y1 = 0;
    if (f.dim == 2) {
        auto [a, b] = q.cell_range(1);
        y0 = std::max<Index>(a, 0);
        y1 = std::min<Index>(b, f.n - 1);
    }
    if (is_inf(p)) {
        double m = 0.0;
        for (Index y = y0; y <= y1; ++y)
            for (Index x = x0; x <= x1; ++x) m = std::max(m, std::abs(f.at(x, y)));
        return m;
    }
    double acc = 0.0;
    for (Index y = y0; y <= y1; ++y)
        for (Index x = x0; x <= x1; ++x) acc += std::pow(std::abs(f.at(x, y)), p);
    return std::pow(acc / q.volume(), 1.0 / p);
}

double average(const GridFunction& f, double p, const Cube& q) {
    return average(f, p, q.box());
}

namespace {

// Core of the maximal operator: M_p(f 1_restrict) at the cells of `out`.
GridFunction maximal_core(const GridFunction& f, double p, const Box& restrict_box, const Box& out) {
    check_exponent(p);
    const bool pinf = is_inf(p);
    const int d = f.dim;
    const Index n = f.n;

    Index rLo[2] = {0, 0}, rHi[2] = {0, 0}, oLo[2] = {0, 0}, oHi[2] = {0, 0};
    for (int a = 0; a < d; ++a) {
        auto [r0, r1] = restrict_box.cell_range(a);
        rLo[a] = std::max<Index>(r0, 0);
        rHi[a] = std::min<Index>(r1, n - 1);
        auto [o0, o1] = out.cell_range(a);
        oLo[a] = std::max<Index>(o0, 0);
        oHi[a] = std::min<Index>(o1, n - 1);
    }

    GridFunction result(d, f.extent, 0.0);
    for (int a = 0; a < d; ++a)
        if (oHi[a] < oLo[a] || rHi[a] < rLo[a]) return result;

    Index lo[2] = {0, 0};
    Index W[2] = {1, 1};
    Index span = 1;
    for (int a = 0; a < d; ++a) {
        lo[a] = std::min(rLo[a], oLo[a]);
        const Index hi = std::max(rHi[a], oHi[a]);
        W[a] = hi - lo[a] + 1;
        span = std::max(span, W[a]);
    }

    // Local copy of |f 1_restrict|^p (|f| itself when p = infinity).
    const Index W1 = (d == 2) ? W[1] : 1;
    std::vector<double> local(static_cast<std::size_t>(W[0] * W1), 0.0);
    for (Index y = (d == 2 ? rLo[1] : 0); y <= (d == 2 ? rHi[1] : 0); ++y)
        for (Index x = rLo[0]; x <= rHi[0]; ++x) {
            const double v = std::abs(f.at(x, y));
            local[static_cast<std::size_t>((d == 2 ? (y - lo[1]) : 0) * W[0] + (x - lo[0]))] =
                pinf ? v : std::pow(v, p);
        }

    // Scales above the covering scale only shrink the average; stop there.
    int s_top = 0;
    while ((Index{1} << s_top) < span && s_top < f.extent) ++s_top;
    s_top = std::min(s_top, f.extent);

    // 2D prefix sums of the local array (finite p path).
    std::vector<double> prefix;
    if (!pinf) {
        prefix.assign(static_cast<std::size_t>((W[0] + 1) * (W1 + 1)), 0.0);
        for (Index j = 0; j < W1; ++j)
            for (Index i = 0; i < W[0]; ++i)
                prefix[static_cast<std::size_t>((j + 1) * (W[0] + 1) + (i + 1))] =
                    prefix[static_cast<std::size_t>(j * (W[0] + 1) + (i + 1))] +
                    prefix[static_cast<std::size_t>((j + 1) * (W[0] + 1) + i)] -
                    prefix[static_cast<std::size_t>(j * (W[0] + 1) + i)] +
                    local[static_cast<std::size_t>(j * W[0] + i)];
    }
    auto rect_sum = [&](Index i0, Index i1, Index j0, Index j1) {  // half-open local coords
        i0 = std::clamp<Index>(i0, 0, W[0]);
        i1 = std::clamp<Index>(i1, 0, W[0]);
        j0 = std::clamp<Index>(j0, 0, W1);
        j1 = std::clamp<Index>(j1, 0, W1);
        if (i1 <= i0 || j1 <= j0) return 0.0;
        const Index P = W[0] + 1;
        return prefix[static_cast<std::size_t>(j1 * P + i1)] - prefix[static_cast<std::size_t>(j0 * P + i1)] -
               prefix[static_cast<std::size_t>(j1 * P + i0)] + prefix[static_cast<std::size_t>(j0 * P + i0)];
    };

    const Index outW0 = oHi[0] - oLo[0] + 1;
    const Index outW1 = (d == 2) ? oHi[1] - oLo[1] + 1 : 1;
    std::vector<double> best(static_cast<std::size_t>(outW0 * outW1), 0.0);

    for (int s = 0; s <= s_top; ++s) {
        const Index len = Index{1} << s;
        const double invmeas = pinf ? 1.0 : std::pow(2.0, -static_cast<double>(s * d));
        const Index c0Lo = oLo[0] - len + 1;
        const Index nc0 = oHi[0] - c0Lo + 1;
        if (d == 1) {
            std::vector<double> win(static_cast<std::size_t>(nc0));
            if (pinf) {
                // corner c window = local cells [c-lo, c-lo+len)
                std::vector<double> padded(static_cast<std::size_t>(nc0 + len - 1), 0.0);
                for (Index k = 0; k < nc0 + len - 1; ++k) {
                    const Index cell = c0Lo + k - lo[0];
                    if (cell >= 0 && cell < W[0]) padded[static_cast<std::size_t>(k)] = local[static_cast<std::size_t>(cell)];
                }
                win = sliding_max(padded, len);
            } else {
                for (Index k = 0; k < nc0; ++k) {
                    const Index c = c0Lo + k;
                    win[static_cast<std::size_t>(k)] = rect_sum(c - lo[0], c - lo[0] + len, 0, 1);
                }
            }
            auto mx = sliding_max(win, len);
            for (Index i = 0; i < outW0; ++i) {
                double cand = mx[static_cast<std::size_t>(i)] * invmeas;
                auto& b = best[static_cast<std::size_t>(i)];
                if (cand > b) b = cand;
            }
        } else {
            const Index c1Lo = oLo[1] - len + 1;
            const Index nc1 = oHi[1] - c1Lo + 1;
            std::vector<double> win(static_cast<std::size_t>(nc0 * nc1), 0.0);
            if (pinf) {
                const Index px = nc0 + len - 1, py = nc1 + len - 1;
                std::vector<double> padded(static_cast<std::size_t>(px * py), 0.0);
                for (Index jy = 0; jy < py; ++jy)
                    for (Index jx = 0; jx < px; ++jx) {
                        const Index cx = c0Lo + jx - lo[0], cy = c1Lo + jy - lo[1];
                        if (cx >= 0 && cx < W[0] && cy >= 0 && cy < W1)
                            padded[static_cast<std::size_t>(jy * px + jx)] =
                                local[static_cast<std::size_t>(cy * W[0] + cx)];
                    }
                // window max over len x len cells
                std::vector<double> rows(static_cast<std::size_t>(nc0 * py));
                for (Index jy = 0; jy < py; ++jy) {
                    std::vector<double> row(padded.begin() + jy * px, padded.begin() + (jy + 1) * px);
                    auto rm = sliding_max(row, len);
                    for (Index jx = 0; jx < nc0; ++jx) rows[static_cast<std::size_t>(jy * nc0 + jx)] = rm[static_cast<std::size_t>(jx)];
                }
                for (Index jx = 0; jx < nc0; ++jx) {
                    std::vector<double> col(static_cast<std::size_t>(py));
                    for (Index jy = 0; jy < py; ++jy) col[static_cast<std::size_t>(jy)] = rows[static_cast<std::size_t>(jy * nc0 + jx)];
                    auto cm = sliding_max(col, len);
                    for (Index jy = 0; jy < nc1; ++jy) win[static_cast<std::size_t>(jy * nc0 + jx)] = cm[static_cast<std::size_t>(jy)];
                }
            } else {
                for (Index jy = 0; jy < nc1; ++jy)
                    for (Index jx = 0; jx < nc0; ++jx) {
                        const Index cx = c0Lo + jx, cy = c1Lo + jy;
                        win[static_cast<std::size_t>(jy * nc0 + jx)] =
                            rect_sum(cx - lo[0], cx - lo[0] + len, cy - lo[1], cy - lo[1] + len);
                    }
            }
            // max over the len x len block of corners containing each out cell
            std::vector<double> rows(static_cast<std::size_t>(outW0 * nc1));
            for (Index jy = 0; jy < nc1; ++jy) {
                std::vector<double> row(win.begin() + jy * nc0, win.begin() + (jy + 1) * nc0);
                auto rm = sliding_max(row, len);
                for (Index i = 0; i < outW0; ++i) rows[static_cast<std::size_t>(jy * outW0 + i)] = rm[static_cast<std::size_t>(i)];
            }
            for (Index i = 0; i < outW0; ++i) {
                std::vector<double> col(static_cast<std::size_t>(nc1));
                for (Index jy = 0; jy < nc1; ++jy) col[static_cast<std::size_t>(jy)] = rows[static_cast<std::size_t>(jy * outW0 + i)];
                auto cm = sliding_max(col, len);
                for (Index j = 0; j < outW1; ++j) {
                    double cand = cm[static_cast<std::size_t>(j)] * invmeas;
                    auto& b = best[static_cast<std::size_t>(j * outW0 + i)];
                    if (cand > b) b = cand;
                }
            }
        }
    }

    for (Index j = 0; j < outW1; ++j)
        for (Index i = 0; i < outW0; ++i) {
            double v = best[static_cast<std::size_t>(j * outW0 + i)];
            result.at(oLo[0] + i, d == 2 ? oLo[1] + j : 0) = pinf ? v : std::pow(v, 1.0 / p);
        }
    return result;
}

}  // namespace

GridFunction maximal_function(const GridFunction& f, double p) {
    Box whole;
    whole.dim = f.dim;
    for (int a = 0; a < f.dim; ++a) {
        whole.lo[a] = 0.0;
        whole.hi[a] = static_cast<double>(f.n);
    }
    return maximal_core(f, p, whole, whole);
}

GridFunction maximal_function_windowed(const GridFunction& f, double p,
                                       const Box& restrict_box, const Box& out) {
    return maximal_core(f, p, restrict_box, out);
}

GridFunction maximal_function_dyadic(const GridFunction& f, double p) {
    check_exponent(p);
    const bool pinf = is_inf(p);
    GridFunction out(f.dim, f.extent, 0.0);
    const Index n = f.n;
    // block[x] holds the current-scale dyadic block aggregate containing x
    std::vector<double> block(f.values.size());
    for (std::size_t i = 0; i < block.size(); ++i)
        block[i] = pinf ? std::abs(f.values[i]) : std::pow(std::abs(f.values[i]), p);
    for (int s = 0; s <= f.extent; ++s) {
        const Index len = Index{1} << s;
        std::vector<double> agg(f.values.size(), 0.0);
        if (f.dim == 1) {
            for (Index b = 0; b < n; b += len) {
                double acc = 0.0;
                for (Index x = b; x < b + len; ++x)
                    acc = pinf ? std::max(acc, std::abs(f.at(x))) : acc + std::pow(std::abs(f.at(x)), p);
                for (Index x = b; x < b + len; ++x) agg[static_cast<std::size_t>(x)] = acc;
            }
        } else {
            for (Index by = 0; by < n; by += len)
                for (Index bx = 0; bx < n; bx += len) {
                    double acc = 0.0;
                    for (Index y = by; y < by + len; ++y)
                        for (Index x = bx; x < bx + len; ++x)
                            acc = pinf ? std::max(acc, std::abs(f.at(x, y))) : acc + std::pow(std::abs(f.at(x, y)), p);
                    for (Index y = by; y < by + len; ++y)
                        for (Index x = bx; x < bx + len; ++x) agg[static_cast<std::size_t>(y * n + x)] = acc;
                }
        }
        const double invmeas = pinf ? 1.0 : std::pow(2.0, -static_cast<double>(s * f.dim));
        for (std::size_t i = 0; i < agg.size(); ++i) {
            const double cand = pinf ? agg[i] : std::pow(agg[i] * invmeas, 1.0 / p);
            out.values[i] = std::max(out.values[i], cand);
        }
    }
    return out;
}

}  // namespace sparsedom
