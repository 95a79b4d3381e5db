#include "sparsedom/generators.hpp"

#include <cmath>
#include <random>

namespace sparsedom {

GridFunction gen_spike(int dim, int extent, double amplitude) {
    GridFunction f(dim, extent, 0.0);
    f.at(f.n / 2, dim == 2 ? f.n / 2 : 0) = amplitude;
    return f;
}

GridFunction gen_random(int dim, int extent, std::uint64_t seed, double fill) {
    GridFunction f(dim, extent, 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Index lo = f.n / 4, hi = 3 * f.n / 4;
    const Index ylo = dim == 2 ? lo : 0, yhi = dim == 2 ? hi : 1;
    for (Index y = ylo; y < yhi; ++y)
        for (Index x = lo; x < hi; ++x)
            if (u(rng) < fill) f.at(x, y) = u(rng) + 0.1;
    return f;
}

GridFunction gen_bump(int dim, int extent, double width_frac) {
    GridFunction f(dim, extent, 0.0);
    const double c = static_cast<double>(f.n) / 2.0;
    const double w = width_frac * static_cast<double>(f.n);
    const Index rows = dim == 2 ? f.n : 1;
    for (Index y = 0; y < rows; ++y)
        for (Index x = 0; x < f.n; ++x) {
            const double dx = (static_cast<double>(x) + 0.5 - c) / w;
            const double dy = dim == 2 ? (static_cast<double>(y) + 0.5 - c) / w : 0.0;
            f.at(x, y) = std::exp(-(dx * dx + dy * dy));
        }
    return f;
}

}  // namespace sparsedom
