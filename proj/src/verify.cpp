#include "sparsedom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace sparsedom {

namespace {

// window sums over the exact per-scale breakdown: any truncation value equals
// the sum of its scale terms, so one full evaluation covers the whole sweep
double max_window_ratio(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                        double psf_value, std::vector<DominationEntry>* entries) {
    const FormValue whole = lambda_trunc(K, f1, f2, 0, K.s_max);
    std::vector<double> scale(static_cast<std::size_t>(K.s_max) + 1, 0.0);
    for (auto [s, v] : whole.breakdown) scale[static_cast<std::size_t>(s)] = v;
    double worst = 0.0;
    for (int mu = 0; mu < K.s_max; ++mu) {
        double acc = 0.0;
        for (int nu = mu + 1; nu <= K.s_max; ++nu) {
            acc += scale[static_cast<std::size_t>(nu)];
            const double ratio = psf_value > 0.0 ? std::abs(acc) / psf_value : 0.0;
            if (entries) entries->push_back({mu, nu, std::abs(acc), ratio});
            worst = std::max(worst, ratio);
        }
    }
    return worst;
}

Stencil abs_stencil(const Stencil& st) {
    Stencil out = st;
    for (double& v : out.v) v = std::abs(v);
    return out;
}

Stencil reflect_stencil(const Stencil& st) {
    Stencil out = st;
    const Index h = st.half;
    if (st.dim == 1) {
        for (Index x = -h; x <= h; ++x) out.ref(x) = st.at(-x);
    } else {
        for (Index y = -h; y <= h; ++y)
            for (Index x = -h; x <= h; ++x) out.ref(x, y) = st.at(-x, -y);
    }
    return out;
}

double inner(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc;
}

GridFunction abs_grid(const GridFunction& f) {
    GridFunction g = f;
    for (double& v : g.values) v = std::abs(v);
    return g;
}

std::map<int, GridFunction> pieces_by_scale(const BadFunction& b, int dim, int extent) {
    std::map<int, GridFunction> by_scale;
    for (const auto& piece : b.pieces) {
        auto [it, fresh] = by_scale.try_emplace(piece.L.s, piece.b);
        if (!fresh)
            for (std::size_t i = 0; i < it->second.values.size(); ++i)
                it->second.values[i] += piece.b.values[i];
    }
    if (by_scale.empty()) by_scale.emplace(0, GridFunction(dim, extent, 0.0));
    return by_scale;
}

double fit_slope(const std::vector<std::pair<int, double>>& profile) {
    std::vector<std::pair<double, double>> pts;
    for (auto [j, v] : profile)
        if (std::abs(v) > 1e-14) pts.push_back({static_cast<double>(j), std::log2(std::abs(v))});
    if (pts.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = static_cast<double>(pts.size());
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

}  // namespace

DominationReport domination_report(const KernelFamily& K, const GridFunction& f1,
                                   const GridFunction& f2, double p1, double p2) {
    DominationReport rep;
    rep.kernel = K.label;
    rep.p1 = p1;
    rep.p2 = p2;
    rep.n = f1.n;
    const SparsifyResult sp = sparsify(f1, f2, p1, p2);
    if (!sp.ok) {
        rep.error = sp.error;
        return rep;
    }
    rep.lambda = sp.certificate.lambda;
    rep.eta = sp.collection.eta;
    rep.psf_value = psf(sp.collection.boxes(), f1, f2, p1, p2);
    rep.max_ratio = max_window_ratio(K, f1, f2, rep.psf_value, &rep.entries);
    rep.ok = true;
    return rep;
}

std::vector<BlowupPoint> blowup_profile(const KernelFamily& K, const GridFunction& f1,
                                        const GridFunction& f2, const std::vector<double>& ps) {
    std::vector<BlowupPoint> out;
    for (double p : ps) {
        const SparsifyResult sp = sparsify(f1, f2, 1.0, p);
        BlowupPoint pt;
        pt.p = p;
        if (sp.ok) {
            const double den = psf(sp.collection.boxes(), f1, f2, 1.0, p);
            pt.ratio = max_window_ratio(K, f1, f2, den, nullptr);
            pt.normalized = pt.ratio / (p / (p - 1.0));
        }
        out.push_back(pt);
    }
    return out;
}

LemmaReport lemma_checks(const KernelFamily& K, const StoppingCollection& Q, int trials,
                         unsigned seed, double q, double r) {
    LemmaReport rep;
    rep.trials = trials;
    const int dim = Q.top.dim;
    const int extent = Q.shadow.extent;
    const double vol_q = Q.top.box().volume();
    const double qp = std::isinf(q) ? 1.0 : q / (q - 1.0);
    const double rp = std::isinf(r) ? 1.0 : r / (r - 1.0);
    const double norm0q = kernel_norm_0(K, q);
    const double norm0inf = kernel_norm_0(K, std::numeric_limits<double>::infinity());
    const double norm1 = kernel_norm_1(K, std::isinf(q) ? 2.0 : q, K.s_max);
    const double ceiling = std::pow(2.0, 8 * dim);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Box top3 = dilate(Q.top, 3.0);

    auto random_on = [&](const Box& box) {
        GridFunction f(dim, extent, 0.0);
        const Index n = f.n;
        const Index rows = dim == 2 ? n : 1;
        for (Index y = 0; y < rows; ++y)
            for (Index x = 0; x < n; ++x)
                if (box.contains_cell(x, y)) f.at(x, y) = u(rng);
        return f;
    };

    for (int t = 0; t < trials; ++t) {
        const GridFunction h1 = random_on(top3);
        const GridFunction h2 = random_on(top3);

        // uniform Y_r x Y_{r'} bound (truncation norm folded into the constant)
        {
            const double val = std::abs(lambda_stop(K, h1, h2, Q, 0, K.s_max).value);
            const double n1 = y_norm(StoppedFunction(h1, Q), r);
            const double n2 = y_norm(StoppedFunction(h2, Q), rp);
            if (n1 > 0.0 && n2 > 0.0)
                rep.uniform_constant = std::max(rep.uniform_constant, val / (vol_q * n1 * n2));
        }

        // zero-mean pieces on the members inside the top
        BadFunction b;
        for (const Cube& L : Q.members) {
            GridFunction piece(dim, extent, 0.0);
            double mean = 0.0;
            Index cells = 0;
            const Box lb = L.box();
            const Index n = piece.n;
            const Index rows = dim == 2 ? n : 1;
            for (Index y = 0; y < rows; ++y)
                for (Index x = 0; x < n; ++x)
                    if (lb.contains_cell(x, y)) {
                        piece.at(x, y) = u(rng);
                        mean += piece.at(x, y);
                        ++cells;
                    }
            if (cells == 0) continue;
            mean /= static_cast<double>(cells);
            for (Index y = 0; y < rows; ++y)
                for (Index x = 0; x < n; ++x)
                    if (lb.contains_cell(x, y)) piece.at(x, y) -= mean;
            b.pieces.push_back({L, piece});
        }
        if (b.pieces.empty()) continue;
        const GridFunction bsum = b.sum(dim, extent);
        const double bx1 = y_norm(StoppedFunction(bsum, Q), 1.0);
        const double hya = y_norm(StoppedFunction(h1, Q), qp);
        if (bx1 == 0.0 || hya == 0.0) continue;

        // per-gap size estimate with absolute values everywhere
        {
            const GridFunction habs = abs_grid(h1);
            const std::map<int, GridFunction> groups = pieces_by_scale(b, dim, extent);
            double worst = 0.0;
            for (const auto& [sl, g] : groups) {
                const GridFunction gabs = abs_grid(g);
                for (int j = 1; sl + j <= K.s_max; ++j) {
                    const int s = sl + j;
                    if (K.sign(s) == 0) continue;
                    const double lhs = inner(convolve(abs_stencil(K.at_scale(s)), gabs), habs);
                    worst = std::max(worst, lhs / (norm0q * vol_q * bx1 * hya));
                }
            }
            rep.trivial_constant = std::max(rep.trivial_constant, worst);
        }

        // both argument orders against the smoothness norm
        {
            const double lhs = std::abs(lambda_stop(K, bsum, h1, Q, 0, K.s_max).value) +
                               std::abs(lambda_stop(K, h1, bsum, Q, 0, K.s_max).value);
            const double c = lhs / ((norm0inf + norm1) * vol_q * bx1 * hya);
            rep.cancellation_constant = std::max(rep.cancellation_constant, c);
        }
    }
    for (double c : {rep.uniform_constant, rep.trivial_constant, rep.cancellation_constant})
        if (c > ceiling) ++rep.flagged;
    return rep;
}

RemainderReport adjoint_remainder_check(const KernelFamily& K, const StoppingCollection& Q,
                                        const GridFunction& h, const BadFunction& b, double q,
                                        int mu, int nu) {
    RemainderReport rep;
    const int dim = h.dim, extent = h.extent;
    const GridFunction bsum = b.sum(dim, extent);
    rep.direct = lambda_stop(K, h, bsum, Q, mu, nu).value;

    // transposed main sum over the pieces whose 3-dilate meets 2Q
    const Box q2 = dilate(Q.top, 2.0);
    BadFunction bin;
    for (const auto& piece : b.pieces)
        if (boxes_intersect(dilate(piece.L, 3.0), q2)) bin.pieces.push_back(piece);
    const std::map<int, GridFunction> groups = pieces_by_scale(bin, dim, extent);
    const int cap = std::min(Q.top.s, nu);
    double main = 0.0;
    for (const auto& [sl, g] : groups) {
        for (int s = std::max(std::max(mu, sl) + 1, 1); s <= std::min(cap, K.s_max); ++s) {
            if (K.sign(s) == 0) continue;
            main += K.sign(s) * inner(convolve(reflect_stencil(K.at_scale(s)), g), h);
        }
    }
    rep.main_sum = main;
    rep.remainder = rep.direct - rep.main_sum;
    const double qp = std::isinf(q) ? 1.0 : q / (q - 1.0);
    rep.bound = kernel_norm_0(K, q) * Q.top.box().volume() *
                y_norm(StoppedFunction(h, Q), qp) * y_norm(StoppedFunction(bsum, Q), qp);
    rep.empirical_c = rep.bound > 0.0 ? std::abs(rep.remainder) / rep.bound : 0.0;
    return rep;
}

DecayReport decay_gap_profile(const KernelFamily& K, const BadFunction& b, const GridFunction& h,
                              const StoppingCollection& Q, int mu, int nu) {
    DecayReport rep;
    BadFunction inside;  // the piecewise form only sees pieces inside the top
    for (const auto& piece : b.pieces)
        if (cube_subset(piece.L, Q.top)) inside.pieces.push_back(piece);
    const std::map<int, GridFunction> groups = pieces_by_scale(inside, h.dim, h.extent);
    const int cap = std::min(Q.top.s, nu);
    std::map<int, double> by_gap;
    for (const auto& [sl, g] : groups) {
        const int lo = std::max(mu, std::min(sl, nu));
        for (int s = std::max(lo + 1, 1); s <= std::min(cap, K.s_max); ++s) {
            if (K.sign(s) == 0) continue;
            by_gap[s - sl] += K.sign(s) * inner(convolve(K.at_scale(s), g), h);
        }
    }
    for (auto [j, v] : by_gap) {
        rep.profile.push_back({j, v});
        rep.total += v;
    }
    rep.whole = lambda_stop_pieces(K, b, h, Q, mu, nu).value;
    rep.slope = fit_slope(rep.profile);
    return rep;
}

DecayReport decay_split_profile(const SphericalFunction& omega, double q, double delta,
                                int j_max) {
    DecayReport rep;
    rep.delta = delta;
    for (int j = 1; j <= j_max; ++j) {
        auto [low, high] = omega_split(omega, delta, j);
        const double nrm = sphere_lq_norm(high, q);
        rep.profile.push_back({j, nrm});
        rep.split_sum += nrm;
    }
    rep.total = rep.split_sum;
    rep.orlicz = orlicz_lorentz_norm(omega, q);
    rep.slope = fit_slope(rep.profile);
    return rep;
}

double weak11_diagnostic(const KernelFamily& K, const GridFunction& f, int mu, int nu) {
    const double l1 = lp_norm(f, 1.0);
    if (l1 == 0.0) return 0.0;
    const GridFunction Tf = apply_truncated(K, f, mu, nu);
    double best = 0.0;
    const double base = l1 / static_cast<double>(f.n);
    for (int k = 0; k <= 2 * f.extent; ++k) {
        const double lam = std::ldexp(base, k);
        Index count = 0;
        for (double v : Tf.values)
            if (std::abs(v) > lam) ++count;
        best = std::max(best, lam * static_cast<double>(count) / l1);
    }
    return best;
}

}  // namespace sparsedom
