#pragma once

#include <map>
#include <vector>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/grid.hpp"
#include "sparsedom/kernels.hpp"
#include "sparsedom/localnorms.hpp"

namespace sparsedom {

/// Bilinear form value plus its per-scale contributions: value equals the sum
/// of the breakdown entries (1e-12 relative).
struct FormValue {
    double value = 0.0;
    std::map<int, double> breakdown;

    void add(int s, double v) {
        value += v;
        breakdown[s] += v;
    }

    FormValue& operator+=(const FormValue& o) {
        value += o.value;
        for (auto [s, v] : o.breakdown) breakdown[s] += v;
        return *this;
    }

    FormValue& operator-=(const FormValue& o) {
        value -= o.value;
        for (auto [s, v] : o.breakdown) breakdown[s] -= v;
        return *this;
    }
};

/// Zero-padded linear convolution (K * f)(x) = sum_y K(x - y) f(y) on the
/// domain; direct for small problems, FFT otherwise. f extended by zero.
GridFunction convolve(const Stencil& st, const GridFunction& f);

/// sum over scales mu < s <= nu of <K_s * f1, f2> (all data real).
FormValue lambda_trunc(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                       int mu, int nu);

/// lambda_trunc with f1 restricted to Q and upper truncation min(s_Q, nu).
FormValue lambda_Q(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                   const Cube& Q, int mu, int nu);

/// Difference form: lambda_Q at the top minus the same over members inside
/// the top cube.
FormValue lambda_stop(const KernelFamily& K, const GridFunction& f1, const GridFunction& f2,
                      const StoppingCollection& Q, int mu, int nu);

/// Reindexed evaluation of the difference form for a piecewise input
/// b = sum_L b_L (pieces on member cubes inside the top): contributions are
/// grouped by the scale gap j = s - s_L >= 1. Cross-validates lambda_stop.
FormValue lambda_stop_pieces(const KernelFamily& K, const BadFunction& b, const GridFunction& f2,
                             const StoppingCollection& Q, int mu, int nu);

/// T f = sum over scales mu < s <= nu of K_s * f.
GridFunction apply_truncated(const KernelFamily& K, const GridFunction& f, int mu, int nu);

/// sum over boxes of |Q| <f1>_{p1,Q} <f2>_{p2,Q}, full geometric measure.
double psf(const std::vector<Box>& collection, const GridFunction& f1, const GridFunction& f2,
           double p1, double p2);

/// Periodic spectral reference operator: DFT multiplier
/// (1 - |xi / bandwidth|^2)_+^delta with xi in [-1/2, 1/2)^d.
GridFunction br_spectral(const GridFunction& f, double delta, double bandwidth = 0.5);

}  // namespace sparsedom
