#include "sparsedom/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsedom/forms.hpp"

namespace sparsedom {

Weight::Weight(GridFunction w_) : w(std::move(w_)) {
    for (double v : w.values)
        if (!(v > 0.0)) throw std::invalid_argument("Weight: values must be strictly positive");
}

namespace {

// inclusive-corner prefix sums: P[y+1][x+1] = sum over cells <= (x, y)
std::vector<double> prefix(const GridFunction& f, double power) {
    const Index n = f.n;
    const Index rows = f.dim == 2 ? n : 1;
    std::vector<double> p(static_cast<std::size_t>((rows + 1) * (n + 1)), 0.0);
    auto at = [&](Index y, Index x) -> double& {
        return p[static_cast<std::size_t>(y * (n + 1) + x)];
    };
    for (Index y = 0; y < rows; ++y)
        for (Index x = 0; x < n; ++x)
            at(y + 1, x + 1) =
                std::pow(f.at(x, y), power) + at(y, x + 1) + at(y + 1, x) - at(y, x);
    return p;
}

double rect(const std::vector<double>& p, Index n, Index x0, Index x1, Index y0, Index y1) {
    auto at = [&](Index y, Index x) {
        return p[static_cast<std::size_t>(y * (n + 1) + x)];
    };
    return at(y1, x1) - at(y0, x1) - at(y1, x0) + at(y0, x0);
}

}  // namespace

double ap_constant(const Weight& weight, double t) {
    if (!(t > 1.0)) throw std::invalid_argument("ap_constant: t must exceed 1");
    if (auto it = weight.cache.find(t); it != weight.cache.end()) return it->second;
    const GridFunction& w = weight.w;
    const Index n = w.n;
    const std::vector<double> pw = prefix(w, 1.0);
    const std::vector<double> ps = prefix(w, 1.0 / (1.0 - t));
    double best = 0.0;
    const Index rows = w.dim == 2 ? n : 1;
    for (Index side = 1; side <= n; side <<= 1) {
        const double vol = w.dim == 2 ? static_cast<double>(side * side)
                                      : static_cast<double>(side);
        const Index ytop = w.dim == 2 ? n - side : 0;
        for (Index y = 0; y <= ytop; ++y)
            for (Index x = 0; x + side <= n; ++x) {
                const Index y1 = w.dim == 2 ? y + side : rows;
                const double aw = rect(pw, n, x, x + side, y, y1) / vol;
                const double as = rect(ps, n, x, x + side, y, y1) / vol;
                best = std::max(best, aw * std::pow(as, t - 1.0));
            }
    }
    weight.cache[t] = best;
    return best;
}

double corollary_bound(double t, double q, double ap, double* exponent) {
    double e = 0.0;
    if (std::isinf(q)) {
        if (!(t > 1.0)) throw std::invalid_argument("corollary_bound: t must exceed 1");
        e = std::max(t, 2.0) / (t - 1.0);
    } else {
        if (!(q > 1.0)) throw std::invalid_argument("corollary_bound: q must exceed 1");
        const double qp = q / (q - 1.0);
        if (!(t > qp)) throw std::invalid_argument("corollary_bound: t must exceed q'");
        e = std::max(1.0, 1.0 / (t - qp));
    }
    if (exponent) *exponent = e;
    return std::pow(ap, e);
}

double weighted_norm_ratio(const KernelFamily& K, const Weight& w, double t,
                           const GridFunction& f, int mu, int nu) {
    if (!(t > 1.0) || std::isinf(t))
        throw std::invalid_argument("weighted_norm_ratio: t must lie in (1, inf)");
    double den = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        den += std::pow(std::abs(f.values[i]), t) * w.w.values[i];
    if (den == 0.0) throw std::invalid_argument("weighted_norm_ratio: zero input");
    const GridFunction Tf = apply_truncated(K, f, mu, nu);
    double num = 0.0;
    for (std::size_t i = 0; i < Tf.values.size(); ++i)
        num += std::pow(std::abs(Tf.values[i]), t) * w.w.values[i];
    return std::pow(num / den, 1.0 / t);
}

}  // namespace sparsedom
