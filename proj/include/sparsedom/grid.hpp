#pragma once

#include <cstdint>
#include <vector>

#include "sparsedom/cube.hpp"

namespace sparsedom {

/// Real-valued function on the integer grid [0, 2^m)^d, unit cell measure.
struct GridFunction {
    GridFunction() = default;
    GridFunction(int dim_, int extent_, double fill = 0.0);

    int dim = 1;
    int extent = 0;
    Index n = 1;  // 2^extent, points per axis
    std::vector<double> values;

    Index cells() const { return static_cast<Index>(values.size()); }

    double& at(Index x, Index y = 0) { return values[static_cast<std::size_t>(y * n + x)]; }
    double at(Index x, Index y = 0) const { return values[static_cast<std::size_t>(y * n + x)]; }

    bool in_domain(Index x, Index y = 0) const {
        return x >= 0 && x < n && (dim == 1 || (y >= 0 && y < n));
    }

    bool all_finite() const;
    bool same_shape(const GridFunction& o) const { return dim == o.dim && extent == o.extent; }
};

/// Subset of the grid domain as a bit mask.
struct Mask {
    Mask() = default;
    Mask(int dim_, int extent_);

    int dim = 1;
    int extent = 0;
    Index n = 1;
    std::vector<std::uint8_t> bits;

    bool get(Index x, Index y = 0) const { return bits[static_cast<std::size_t>(y * n + x)] != 0; }
    void set(Index x, Index y = 0, bool v = true) { bits[static_cast<std::size_t>(y * n + x)] = v ? 1 : 0; }
    Index count() const;
    bool empty() const { return count() == 0; }
    bool same_shape(const Mask& o) const { return dim == o.dim && extent == o.extent; }
};

/// Number of mask cells inside a box (domain cells only).
Index mask_count_in_box(const Mask& m, const Box& b);
/// Number of domain cells inside a box.
Index domain_cells_in_box(int dim, Index n, const Box& b);

/// Global L^p norm, counting measure; p = infinity() gives sup norm.
double lp_norm(const GridFunction& f, double p);

/// <f>_{p,Q} = |Q|^{-1/p} ||f 1_Q||_p with full geometric measure |Q| = vol(Q),
/// f extended by zero outside the domain.
double average(const GridFunction& f, double p, const Box& q);
double average(const GridFunction& f, double p, const Cube& q);

/// Pointwise p-maximal function over all integer-cornered axis-aligned cubes
/// of dyadic sidelength 2^s, s in {0,...,m} (corners may overhang the domain).
GridFunction maximal_function(const GridFunction& f, double p);

/// Dyadic variant (corners aligned to the lattice); provided for speed
/// comparisons, not used in the Y_p norms.
GridFunction maximal_function_dyadic(const GridFunction& f, double p);

/// M_p(f 1_{restrict}) evaluated at the cells of `out` (intersected with the
/// domain); other output cells are 0. Equal there to
/// maximal_function(f restricted, p) but touches only a window around `out`.
GridFunction maximal_function_windowed(const GridFunction& f, double p,
                                       const Box& restrict_box, const Box& out);

}  // namespace sparsedom
