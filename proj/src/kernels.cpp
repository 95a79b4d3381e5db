#include "sparsedom/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsedom {

namespace {

double g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double conj_exp(double q) { return std::isinf(q) ? 1.0 : q / (q - 1.0); }

double stencil_lq(const Stencil& a, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double x : a.v) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (double x : a.v) acc += std::pow(std::abs(x), q);
    return std::pow(acc, 1.0 / q);
}

}  // namespace

double cutoff_chi(double r) {
    const double a = g(1.0 - r);
    const double b = g(r - 0.5);
    return a + b > 0.0 ? a / (a + b) : 0.0;
}

double bump_phi(double r) { return cutoff_chi(r) - cutoff_chi(2.0 * r); }

Partition::Partition(int s_min_, int s_max_) : s_min(s_min_), s_max(s_max_) {
    if (s_min < 1 || s_max < s_min) throw std::invalid_argument("Partition: bad scale range");
}

double Partition::sum(double r) const {
    double acc = 0.0;
    for (int s = s_min; s <= s_max; ++s) acc += term(s, r);
    return acc;
}

Stencil::Stencil(int dim_, int s_) : dim(dim_), s(s_) {
    if (s < 1) throw std::invalid_argument("Stencil: scale must be >= 1");
    half = (Index{1} << s) - 1;
    v.assign(static_cast<std::size_t>(dim == 2 ? width() * width() : width()), 0.0);
}

namespace {

// fills stencil with factor(x, y, |x|) * phi(2^{-s}|x|) over the annulus
template <typename F>
Stencil annular_stencil(int dim, int s, F&& factor) {
    Stencil st(dim, s);
    for (Index y = (dim == 2 ? -st.half : 0); y <= (dim == 2 ? st.half : 0); ++y)
        for (Index x = -st.half; x <= st.half; ++x) {
            if (x == 0 && y == 0) continue;
            const double r = std::hypot(static_cast<double>(x), static_cast<double>(y));
            const double phi = bump_phi(std::ldexp(r, -s));
            if (phi == 0.0) continue;
            st.ref(x, y) = factor(static_cast<double>(x), static_cast<double>(y), r) * phi;
        }
    return st;
}

}  // namespace

Stencil rough_kernel(const SphericalFunction& omega, int s, bool allow_nonzero_mean) {
    if (!allow_nonzero_mean) {
        double l1 = 0.0;
        for (double v : omega.values) l1 += std::abs(v);
        if (std::abs(omega.integral()) > 1e-12 * std::max(l1 * omega.cell_measure(), 1.0))
            throw std::invalid_argument("rough_kernel: omega must have zero mean");
    }
    const double amp = std::ldexp(1.0, -s * omega.dim);
    return annular_stencil(omega.dim, s, [&](double x, double y, double) {
        return omega.at_direction(x, y) * amp;
    });
}

KernelFamily rough_family(const SphericalFunction& omega, int s_max, bool allow_nonzero_mean) {
    KernelFamily K;
    K.dim = omega.dim;
    K.s_max = s_max;
    K.label = "rough";
    for (int s = 1; s <= s_max; ++s) K.stencils.push_back(rough_kernel(omega, s, allow_nonzero_mean));
    K.signs.assign(static_cast<std::size_t>(s_max), 1);
    return K;
}

KernelFamily dini_family(int dim, const std::function<double(double, double)>& kernel, int s_max) {
    KernelFamily K;
    K.dim = dim;
    K.s_max = s_max;
    K.label = "dini";
    K.signs.assign(static_cast<std::size_t>(s_max), 1);
    double worst = 0.0;
    for (int s = 1; s <= s_max; ++s) {
        K.stencils.push_back(annular_stencil(dim, s, [&](double x, double y, double r) {
            const double v = kernel(x, y);
            worst = std::max(worst, std::pow(r, static_cast<double>(dim)) * std::abs(v));
            return v;
        }));
    }
    K.normalization_ok = worst <= 1.0 + 1e-12;
    return K;
}

Stencil br_kernel(int s, int dim) {
    const double delta = 0.5 * (dim - 1);
    const double amp = std::ldexp(1.0, -s * dim);
    return annular_stencil(dim, s, [&](double, double, double r) {
        return amp * std::cos(2.0 * std::numbers::pi * (r - 0.25 * delta));
    });
}

KernelFamily br_family(int dim, int s_max) {
    KernelFamily K;
    K.dim = dim;
    K.s_max = s_max;
    K.label = "br";
    for (int s = 1; s <= s_max; ++s) K.stencils.push_back(br_kernel(s, dim));
    K.signs.assign(static_cast<std::size_t>(s_max), 1);
    return K;
}

Stencil br_tail(int dim, Index radius) {
    Stencil st(dim, 1);
    st.half = radius;
    st.v.assign(static_cast<std::size_t>(dim == 2 ? st.width() * st.width() : st.width()), 0.0);
    for (Index y = (dim == 2 ? -radius : 0); y <= (dim == 2 ? radius : 0); ++y)
        for (Index x = -radius; x <= radius; ++x) {
            const double r = std::hypot(static_cast<double>(x), static_cast<double>(y));
            st.ref(x, y) = std::pow(1.0 + r, -static_cast<double>(dim + 1));
        }
    return st;
}

double kernel_norm_0(const KernelFamily& K, double q) {
    if (!(q > 1.0)) throw std::invalid_argument("kernel_norm_0: q must lie in (1, inf]");
    auto it = K.norm_cache.find({0, q});
    if (it != K.norm_cache.end()) return it->second;
    const double qp = conj_exp(q);
    double best = 0.0;
    for (int s = 1; s <= K.s_max; ++s)
        best = std::max(best, std::pow(2.0, s * K.dim / qp) * stencil_lq(K.at_scale(s), q) *
                                  std::abs(K.sign(s)));
    K.norm_cache[{0, q}] = best;
    return best;
}

double kernel_norm_1(const KernelFamily& K, double beta, int j_max) {
    if (!(beta > 1.0)) throw std::invalid_argument("kernel_norm_1: beta must lie in (1, inf]");
    auto it = K.norm_cache.find({1, beta});
    if (it != K.norm_cache.end()) return it->second;
    const double bp = conj_exp(beta);
    double total = 0.0;
    for (int j = 1; j <= j_max; ++j) {
        double varpi = 0.0;
        for (int s = 1; s <= K.s_max; ++s) {
            if (K.sign(s) == 0) continue;
            const Index hmax = (s - j - 1) >= 1 ? (Index{1} << (s - j - 1)) - 1 : 0;
            if (hmax == 0) continue;  // no resolvable shift below 2^{s-j-1}
            const Stencil& st = K.at_scale(s);
            const double scale = std::pow(2.0, s * K.dim / bp);
            for (Index hy = (K.dim == 2 ? -hmax : 0); hy <= (K.dim == 2 ? hmax : 0); ++hy)
                for (Index hx = -hmax; hx <= hmax; ++hx) {
                    if (hx == 0 && hy == 0) continue;
                    // || K_s(.) - K_s(. + h) ||_beta over the union of supports
                    double acc = 0.0, sup = 0.0;
                    const Index lo = -st.half - std::max<Index>(std::abs(hx), std::abs(hy));
                    const Index hi = st.half + std::max<Index>(std::abs(hx), std::abs(hy));
                    for (Index y = (K.dim == 2 ? lo : 0); y <= (K.dim == 2 ? hi : 0); ++y)
                        for (Index x = lo; x <= hi; ++x) {
                            auto val = [&](Index a, Index b) {
                                return (std::abs(a) <= st.half &&
                                        (K.dim == 1 || std::abs(b) <= st.half))
                                           ? st.at(a, b)
                                           : 0.0;
                            };
                            const double dff = std::abs(val(x, y) - val(x + hx, y + hy));
                            if (std::isinf(beta))
                                sup = std::max(sup, dff);
                            else
                                acc += std::pow(dff, beta);
                        }
                    const double norm = std::isinf(beta) ? sup : std::pow(acc, 1.0 / beta);
                    varpi = std::max(varpi, scale * norm);
                }
        }
        total += varpi;
    }
    K.norm_cache[{1, beta}] = total;
    return total;
}

std::pair<SphericalFunction, SphericalFunction> omega_split(const SphericalFunction& omega,
                                                            double delta, int j) {
    if (!(delta > 0.0) || j < 1) throw std::invalid_argument("omega_split: need delta > 0, j >= 1");
    const double thr = std::pow(2.0, delta * j);
    SphericalFunction low = omega, high = omega;
    for (std::size_t i = 0; i < omega.values.size(); ++i) {
        if (std::abs(omega.values[i]) > thr) {
            low.values[i] = 0.0;
        } else {
            high.values[i] = 0.0;
        }
    }
    return {low, high};
}

}  // namespace sparsedom
