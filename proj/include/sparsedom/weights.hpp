#pragma once

#include <map>

#include "sparsedom/grid.hpp"
#include "sparsedom/kernels.hpp"

namespace sparsedom {

/// Strictly positive density on the grid with cached Muckenhoupt constants.
struct Weight {
    explicit Weight(GridFunction w_);  // throws unless min value > 0

    GridFunction w;
    mutable std::map<double, double> cache;  // t -> A_t constant
};

/// Muckenhoupt constant sup_Q <w>_{1,Q} <w^{1/(1-t)}>_{1,Q}^{t-1}, sup over all
/// integer-cornered cubes of dyadic sidelength fully inside the domain. t > 1.
double ap_constant(const Weight& w, double t);

/// Power of the A-constant in the weighted operator bound. For a kernel index
/// q < infinity: exponent max{1, 1/(t - q')} on the A_{t/q'} constant (needs
/// t > q'); for q = infinity: exponent (1/(t-1)) max{t, 2} on A_t (needs
/// t > 1). Returns ap^exponent; the exponent itself via out parameter.
double corollary_bound(double t, double q, double ap, double* exponent = nullptr);

/// ||sum over scales of K_s * f||_{L^t(w)} / ||f||_{L^t(w)} with
/// ||g||_{L^t(w)} = (sum |g|^t w)^{1/t}. f must be nonzero.
double weighted_norm_ratio(const KernelFamily& K, const Weight& w, double t,
                           const GridFunction& f, int mu, int nu);

}  // namespace sparsedom
