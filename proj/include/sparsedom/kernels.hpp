#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/sphere.hpp"

namespace sparsedom {

/// C-infinity cutoff: 1 on [0, 1/2], 0 on [1, inf), strictly between elsewhere.
double cutoff_chi(double r);

/// Radial annulus profile phi(r) = chi(r) - chi(2r), supported in (1/4, 1).
double bump_phi(double r);

/// Dyadic partition of unity: sum_s phi(2^{-s} r) telescopes to 1 for
/// 2^{s_min - 1} <= r <= 2^{s_max - 1}.
struct Partition {
    int s_min = 1;
    int s_max = 1;

    Partition(int s_min_, int s_max_);
    double term(int s, double r) const { return bump_phi(std::ldexp(r, -s)); }
    double sum(double r) const;
};

/// Convolution stencil over integer offsets |x|_inf <= half, one kernel scale.
struct Stencil {
    int dim = 1;
    int s = 1;
    Index half = 0;
    std::vector<double> v;

    Stencil() = default;
    Stencil(int dim_, int s_);

    Index width() const { return 2 * half + 1; }
    double at(Index x, Index y = 0) const {
        return v[static_cast<std::size_t>((dim == 2 ? (y + half) * width() : 0) + x + half)];
    }
    double& ref(Index x, Index y = 0) {
        return v[static_cast<std::size_t>((dim == 2 ? (y + half) * width() : 0) + x + half)];
    }
};

/// Single-scale kernels K_s supported in the annulus 2^{s-2} < |z| < 2^s,
/// scales s in [1, s_max], with optional per-scale signs.
struct KernelFamily {
    int dim = 1;
    int s_max = 1;
    std::string label;
    std::vector<Stencil> stencils;  // index s-1 holds scale s
    std::vector<int> signs;         // in {-1, 0, 1}, default all 1
    bool normalization_ok = true;   // dini size normalization |x|^d |K(x)| <= 1

    const Stencil& at_scale(int s) const { return stencils[static_cast<std::size_t>(s - 1)]; }
    int sign(int s) const { return signs[static_cast<std::size_t>(s - 1)]; }

    mutable std::map<std::pair<int, double>, double> norm_cache;  // (kind, exponent)
};

/// K_s(x) = Omega(x/|x|) 2^{-sd} phi(2^{-s} x); requires zero-mean Omega
/// unless allow_nonzero_mean.
Stencil rough_kernel(const SphericalFunction& omega, int s, bool allow_nonzero_mean = false);
KernelFamily rough_family(const SphericalFunction& omega, int s_max,
                          bool allow_nonzero_mean = false);

/// K_s(x) = K(x) phi(2^{-s} x) for a pointwise kernel callable on offsets.
/// normalization_ok records the measured size bound |x|^d |K(x)| <= 1.
KernelFamily dini_family(int dim, const std::function<double(double, double)>& kernel, int s_max);

/// Oscillatory model at the critical index delta = (d-1)/2:
/// K_s(x) = 2^{-sd} phi(2^{-s} x) cos(2 pi (|x| - delta/4)).
Stencil br_kernel(int s, int dim);
KernelFamily br_family(int dim, int s_max);

/// Truncated decay profile L(x) = (1 + |x|)^{-(d+1)}, |x|_inf <= radius.
Stencil br_tail(int dim, Index radius);

/// sup_s 2^{sd/q'} ||K_s||_q over the stencils, q in (1, inf].
double kernel_norm_0(const KernelFamily& K, double q);

/// sum_{j=1}^{j_max} of sup over s and integer shifts 0 < |h|_inf < 2^{s-j-1}
/// of 2^{sd/b'} ||K_s(.) - K_s(. + h)||_b.
double kernel_norm_1(const KernelFamily& K, double beta, int j_max);

/// Split of the sphere samples at threshold 2^{delta j}:
/// first = below-threshold part, second = the spike part.
std::pair<SphericalFunction, SphericalFunction> omega_split(const SphericalFunction& omega,
                                                            double delta, int j);

}  // namespace sparsedom
