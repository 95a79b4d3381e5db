#include "sparsedom/forms.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>

namespace sparsedom {

namespace {

Index next_pow2(Index n) {
    Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

GridFunction convolve_direct(const Stencil& st, const GridFunction& f) {
    GridFunction out(f.dim, f.extent, 0.0);
    const Index n = f.n, h = st.half;
    if (f.dim == 1) {
        for (Index y = 0; y < n; ++y) {
            const double fy = f.at(y);
            if (fy == 0.0) continue;
            const Index x0 = std::max<Index>(0, y - h), x1 = std::min<Index>(n - 1, y + h);
            for (Index x = x0; x <= x1; ++x) out.at(x) += st.at(x - y) * fy;
        }
    } else {
        for (Index yy = 0; yy < n; ++yy)
            for (Index yx = 0; yx < n; ++yx) {
                const double fy = f.at(yx, yy);
                if (fy == 0.0) continue;
                const Index x0 = std::max<Index>(0, yx - h), x1 = std::min<Index>(n - 1, yx + h);
                const Index y0 = std::max<Index>(0, yy - h), y1 = std::min<Index>(n - 1, yy + h);
                for (Index xy = y0; xy <= y1; ++xy)
                    for (Index xx = x0; xx <= x1; ++xx)
                        out.at(xx, xy) += st.at(xx - yx, xy - yy) * fy;
            }
    }
    return out;
}

GridFunction convolve_fft(const Stencil& st, const GridFunction& f) {
    const Index n = f.n;
    const Index L = next_pow2(n + 2 * st.half + 1);
    const int d = f.dim;
    const Index rows = d == 2 ? L : 1;
    const Index cplx = L / 2 + 1;
    std::vector<double> a(static_cast<std::size_t>(rows * L), 0.0);
    std::vector<double> b(static_cast<std::size_t>(rows * L), 0.0);
    for (Index y = 0; y < (d == 2 ? n : 1); ++y)
        for (Index x = 0; x < n; ++x) a[static_cast<std::size_t>(y * L + x)] = f.at(x, y);
    for (Index oy = (d == 2 ? -st.half : 0); oy <= (d == 2 ? st.half : 0); ++oy)
        for (Index ox = -st.half; ox <= st.half; ++ox) {
            const double v = st.at(ox, oy);
            if (v == 0.0) continue;
            const Index px = (ox % L + L) % L;
            const Index py = d == 2 ? (oy % L + L) % L : 0;
            b[static_cast<std::size_t>(py * L + px)] = v;
        }

    std::vector<std::complex<double>> fa(static_cast<std::size_t>(rows * cplx));
    std::vector<std::complex<double>> fb(static_cast<std::size_t>(rows * cplx));
    auto* ra = reinterpret_cast<fftw_complex*>(fa.data());
    auto* rb = reinterpret_cast<fftw_complex*>(fb.data());

    fftw_plan pf, pb2, pinv;
    if (d == 1) {
        pf = fftw_plan_dft_r2c_1d(static_cast<int>(L), a.data(), ra, FFTW_ESTIMATE);
        pb2 = fftw_plan_dft_r2c_1d(static_cast<int>(L), b.data(), rb, FFTW_ESTIMATE);
    } else {
        pf = fftw_plan_dft_r2c_2d(static_cast<int>(L), static_cast<int>(L), a.data(), ra, FFTW_ESTIMATE);
        pb2 = fftw_plan_dft_r2c_2d(static_cast<int>(L), static_cast<int>(L), b.data(), rb, FFTW_ESTIMATE);
    }
    fftw_execute(pf);
    fftw_execute(pb2);
    const double scale = 1.0 / static_cast<double>(d == 2 ? L * L : L);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i] * scale;
    if (d == 1)
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(L), ra, a.data(), FFTW_ESTIMATE);
    else
        pinv = fftw_plan_dft_c2r_2d(static_cast<int>(L), static_cast<int>(L), ra, a.data(), FFTW_ESTIMATE);
    fftw_execute(pinv);
    fftw_destroy_plan(pf);
    fftw_destroy_plan(pb2);
    fftw_destroy_plan(pinv);

    GridFunction out(f.dim, f.extent, 0.0);
    for (Index y = 0; y < (d == 2 ? n : 1); ++y)
        for (Index x = 0; x < n; ++x) out.at(x, y) = a[static_cast<std::size_t>(y * L + x)];
    return out;
}

}  // namespace

GridFunction convolve(const Stencil& st, const GridFunction& f) {
    if (st.dim != f.dim) throw std::invalid_argument("convolve: dim mismatch");
    const double box = std::pow(static_cast<double>(2 * st.half + 1), f.dim);
    const double cells = std::pow(static_cast<double>(f.n), f.dim);
    if (cells * box <= 67108864.0) return convolve_direct(st, f);
    return convolve_fft(st, f);
}

FormValue lambda_trunc(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                       int mu, int nu) {
    FormValue out;
    for (int s = std::max(mu + 1, 1); s <= std::min(nu, K.s_max); ++s) {
        if (K.sign(s) == 0) continue;
        const GridFunction Tf = convolve(K.at_scale(s), f1);
        double ip = 0.0;
        for (std::size_t i = 0; i < Tf.values.size(); ++i) ip += Tf.values[i] * f2.values[i];
        out.add(s, K.sign(s) * ip);
    }
    return out;
}

namespace {

GridFunction restrict_to(const GridFunction& f, const Box& b) {
    GridFunction g(f.dim, f.extent, 0.0);
    auto [x0, x1] = b.cell_range(0);
    x0 = std::max<Index>(x0, 0);
    x1 = std::min<Index>(x1, f.n - 1);
    Index y0 = 0, y1 = 0;
    if (f.dim == 2) {
        auto [a, c] = b.cell_range(1);
        y0 = std::max<Index>(a, 0);
        y1 = std::min<Index>(c, f.n - 1);
    }
    for (Index y = y0; y <= y1; ++y)
        for (Index x = x0; x <= x1; ++x) g.at(x, y) = f.at(x, y);
    return g;
}

}  // namespace

FormValue lambda_Q(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                   const Cube& Q, int mu, int nu) {
    return lambda_trunc(K, restrict_to(f1, Q.box()), f2, mu, std::min(Q.s, nu));
}

FormValue lambda_stop(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                      const StoppingCollection& Q, int mu, int nu) {
    FormValue out = lambda_Q(K, f1, f2, Q.top, mu, nu);
    for (const Cube& L : Q.members)
        if (cube_subset(L, Q.top)) out -= lambda_Q(K, f1, f2, L, mu, nu);
    return out;
}

FormValue lambda_stop_pieces(const KernelFamily& K, const BadFunction& b, const GridFunction& f2,
                             const StoppingCollection& Q, int mu, int nu) {
    // group pieces inside the top by scale
    std::map<int, GridFunction> by_scale;
    int dim = Q.top.dim, extent = 0;
    for (const auto& piece : b.pieces) {
        if (!cube_subset(piece.L, Q.top)) continue;
        dim = piece.b.dim;
        extent = piece.b.extent;
        auto [it, fresh] = by_scale.try_emplace(piece.L.s, piece.b);
        if (!fresh)
            for (std::size_t i = 0; i < it->second.values.size(); ++i)
                it->second.values[i] += piece.b.values[i];
    }
    FormValue out;
    const int top_cap = std::min(Q.top.s, nu);
    for (const auto& [sl, bs] : by_scale) {
        const int lo = std::max(mu, std::min(sl, nu));  // scales removed by the member term
        for (int s = std::max(lo + 1, 1); s <= std::min(top_cap, K.s_max); ++s) {
            if (K.sign(s) == 0) continue;
            const GridFunction Tb = convolve(K.at_scale(s), bs);
            double ip = 0.0;
            for (std::size_t i = 0; i < Tb.values.size(); ++i) ip += Tb.values[i] * f2.values[i];
            out.add(s, K.sign(s) * ip);
        }
    }
    (void)extent;
    (void)dim;
    return out;
}

GridFunction apply_truncated(const KernelFamily& K, const GridFunction& f, int mu, int nu) {
    GridFunction out(f.dim, f.extent, 0.0);
    for (int s = std::max(mu + 1, 1); s <= std::min(nu, K.s_max); ++s) {
        if (K.sign(s) == 0) continue;
        const GridFunction Tf = convolve(K.at_scale(s), f);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += K.sign(s) * Tf.values[i];
    }
    return out;
}

double psf(const std::vector<Box>& collection, const GridFunction& f1, const GridFunction& f2,
           double p1, double p2) {
    if (std::isinf(p1) || std::isinf(p2) || !(p1 >= 1.0) || !(p2 >= 1.0))
        throw std::invalid_argument("psf: exponents must lie in [1, inf)");
    double acc = 0.0;
    for (const Box& q : collection) acc += q.volume() * average(f1, p1, q) * average(f2, p2, q);
    return acc;
}

GridFunction br_spectral(const GridFunction& f, double delta, double bandwidth) {
    if (!(bandwidth > 0.0) || delta < 0.0) throw std::invalid_argument("br_spectral: bad parameters");
    const Index n = f.n;
    const int d = f.dim;
    const Index rows = d == 2 ? n : 1;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(rows * n));
    for (std::size_t i = 0; i < f.values.size(); ++i) buf[i] = f.values[i];
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd, inv;
    if (d == 1) {
        fwd = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        fwd = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), raw, raw, FFTW_FORWARD,
                               FFTW_ESTIMATE);
        inv = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), raw, raw, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    auto freq = [n](Index k) {
        const double x = static_cast<double>(k < n - k ? k : k - n) / static_cast<double>(n);
        return x;
    };
    for (Index ky = 0; ky < rows; ++ky)
        for (Index kx = 0; kx < n; ++kx) {
            const double fx = freq(kx) / bandwidth;
            const double fy = d == 2 ? freq(ky) / bandwidth : 0.0;
            const double r2 = fx * fx + fy * fy;
            const double m = r2 < 1.0 ? (delta == 0.0 ? 1.0 : std::pow(1.0 - r2, delta)) : 0.0;
            buf[static_cast<std::size_t>(ky * n + kx)] *= m;
        }
    fftw_execute(inv);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    GridFunction out(f.dim, f.extent, 0.0);
    const double scale = 1.0 / static_cast<double>(d == 2 ? n * n : n);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = buf[i].real() * scale;
    return out;
}

}  // namespace sparsedom
