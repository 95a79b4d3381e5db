#pragma once

#include <map>
#include <vector>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/grid.hpp"
#include "sparsedom/sphere.hpp"

namespace sparsedom {

/// Function supported in 3*top of a stopping collection, carrying the
/// collection so the localized norms below are well-posed.
struct StoppedFunction {
    GridFunction h;
    StoppingCollection collection;

    StoppedFunction(GridFunction h_, StoppingCollection c);  // enforces supp h in 3*top

    mutable std::map<double, double> y_cache;
};

/// max( sup |h| off the shadow , sup_L min over grid points of the 32-fold
/// dilate of L of M_p h ). For p = infinity just sup |h|. Dilates that miss
/// the domain entirely contribute nothing (flagged via dropped_hats).
double y_norm(const StoppedFunction& h, double p, int* dropped_hats = nullptr);

struct BadPiece {
    Cube L;
    GridFunction b;  // supported in L
};

/// Sum of per-cube pieces b = sum_L b_L; mean_zero marks exact per-cube
/// cancellation (within 1e-12 * ||b_L||_1).
struct BadFunction {
    std::vector<BadPiece> pieces;
    bool mean_zero = false;

    GridFunction sum(int dim, int extent) const;
    bool valid(double tol_scale = 1e-12) const;
};

struct CzDecomposition {
    GridFunction g;
    BadFunction b;
    double y_h = 0.0;       // ||h||_{Y_p}
    double g_sup = 0.0;     // ||g||_{Y_inf}
    double b_norm = 0.0;    // ||b||_{Y_p} under the X_p = Y_p identification
    bool g_bound_ok = false;  // g_sup   <= 2^{5d}   * y_h
    bool b_bound_ok = false;  // b_norm  <= 2^{5d+1} * y_h
};

/// g = h off the shadow and the per-cube mean on each member; b_L is the
/// mean-free remainder on L. h = g + b pointwise.
CzDecomposition cz_decompose(const StoppedFunction& h, double p);

/// q * integral over t > 0 of log(e + t) * measure{|omega| > t}^{1/q} dt,
/// evaluated exactly on the piecewise-constant sampled distribution function.
double orlicz_lorentz_norm(const SphericalFunction& omega, double q);

/// Plain L^q norm on the sphere, for the embedding comparisons.
double sphere_lq_norm(const SphericalFunction& omega, double q);

}  // namespace sparsedom
