#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparsedom {

using Index = std::int64_t;

/// Axis-aligned box with real endpoints, half-open [lo, hi) per axis.
/// Grid-cell membership is by cell-center inclusion: cell x covers
/// [x, x+1)^d and belongs to the box iff its center x + 1/2 does.
struct Box {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    double side(int axis) const { return hi[axis] - lo[axis]; }

    double volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= side(a);
        return v;
    }

    bool contains_cell(Index x, Index y = 0) const {
        const std::array<double, 2> c{static_cast<double>(x) + 0.5,
                                      static_cast<double>(y) + 0.5};
        for (int a = 0; a < dim; ++a)
            if (c[a] < lo[a] || c[a] >= hi[a]) return false;
        return true;
    }

    /// Inclusive index range of member cells along an axis.
    /// Empty range is signaled by first > last.
    std::pair<Index, Index> cell_range(int axis) const {
        const Index first = static_cast<Index>(std::ceil(lo[axis] - 0.5));
        const Index last = static_cast<Index>(std::ceil(hi[axis] - 0.5)) - 1;
        return {first, last};
    }

    bool contains_box(const Box& other) const {
        for (int a = 0; a < dim; ++a)
            if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
        return true;
    }
};

/// Positive-measure intersection test.
inline bool boxes_intersect(const Box& a, const Box& b) {
    for (int ax = 0; ax < a.dim; ++ax)
        if (std::max(a.lo[ax], b.lo[ax]) >= std::min(a.hi[ax], b.hi[ax]))
            return false;
    return true;
}

/// Dyadic cube: sidelength 2^s, corner divisible by 2^s.
struct Cube {
    int dim = 1;
    int s = 0;
    std::array<Index, 2> corner{0, 0};

    Cube() = default;
    Cube(int dim_, int s_, Index cx, Index cy = 0) : dim(dim_), s(s_), corner{cx, cy} {
        if (s < 0) throw std::invalid_argument("Cube: negative scale");
        const Index len = side();
        for (int a = 0; a < dim; ++a)
            if (corner[a] % len != 0 && (corner[a] % len + len) % len != 0)
                throw std::invalid_argument("Cube: corner not aligned to 2^s");
    }

    Index side() const { return Index{1} << s; }
    double center(int axis) const { return static_cast<double>(corner[axis]) + 0.5 * side(); }

    Box box() const {
        Box b;
        b.dim = dim;
        for (int a = 0; a < dim; ++a) {
            b.lo[a] = static_cast<double>(corner[a]);
            b.hi[a] = static_cast<double>(corner[a] + side());
        }
        return b;
    }

    Cube parent() const {
        const Index len2 = Index{1} << (s + 1);
        auto snap = [len2](Index c) { return c >= 0 ? (c / len2) * len2 : -(((-c + len2 - 1) / len2) * len2); };
        return Cube(dim, s + 1, snap(corner[0]), dim == 2 ? snap(corner[1]) : 0);
    }

    bool operator==(const Cube& o) const {
        return dim == o.dim && s == o.s && corner == o.corner;
    }

    std::string str() const {
        std::string r = "Cube(s=" + std::to_string(s) + ", corner=" + std::to_string(corner[0]);
        if (dim == 2) r += "," + std::to_string(corner[1]);
        return r + ")";
    }
};

/// lambda-fold dilate about the cube center.
inline Box dilate(const Cube& q, double lambda) {
    if (lambda < 1.0) throw std::invalid_argument("dilate: lambda < 1");
    Box b;
    b.dim = q.dim;
    const double half = 0.5 * lambda * static_cast<double>(q.side());
    for (int a = 0; a < q.dim; ++a) {
        const double c = q.center(a);
        b.lo[a] = c - half;
        b.hi[a] = c + half;
    }
    return b;
}

/// Neighbor relation: 7L and 7L' intersect and scales differ by < 8.
inline bool neighbors(const Cube& l, const Cube& lp) {
    if (l.dim != lp.dim) throw std::invalid_argument("neighbors: dimension mismatch");
    return std::abs(l.s - lp.s) < 8 && boxes_intersect(dilate(l, 7.0), dilate(lp, 7.0));
}

/// True iff a is contained in b (as dyadic cubes: equal or descendant).
inline bool cube_subset(const Cube& a, const Cube& b) {
    if (a.s > b.s) return false;
    for (int ax = 0; ax < a.dim; ++ax)
        if (a.corner[ax] < b.corner[ax] || a.corner[ax] + a.side() > b.corner[ax] + b.side())
            return false;
    return true;
}

}  // namespace sparsedom
