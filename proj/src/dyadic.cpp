#include "sparsedom/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace sparsedom {

namespace {

// key of the dyadic cube at scale s containing (snapped) corner coordinates
std::int64_t cube_key(Index cx, Index cy, int s, Index n) {
    const Index kx = cx >> s, ky = cy >> s;
    return kx * (2 * n + 1) + ky;
}

Index snap_down(Index c, int s) {
    // floor to a multiple of 2^s, correct for negatives
    return (c >> s) << s;
}

struct PrefixSum {
    int dim;
    Index n;
    std::vector<std::int64_t> p;  // (n+1) or (n+1)^2

    explicit PrefixSum(const Mask& m) : dim(m.dim), n(m.n) {
        if (dim == 1) {
            p.assign(static_cast<std::size_t>(n + 1), 0);
            for (Index x = 0; x < n; ++x)
                p[static_cast<std::size_t>(x + 1)] = p[static_cast<std::size_t>(x)] + (m.get(x) ? 1 : 0);
        } else {
            p.assign(static_cast<std::size_t>((n + 1) * (n + 1)), 0);
            for (Index y = 0; y < n; ++y)
                for (Index x = 0; x < n; ++x)
                    p[static_cast<std::size_t>((y + 1) * (n + 1) + x + 1)] =
                        p[static_cast<std::size_t>(y * (n + 1) + x + 1)] +
                        p[static_cast<std::size_t>((y + 1) * (n + 1) + x)] -
                        p[static_cast<std::size_t>(y * (n + 1) + x)] + (m.get(x, y) ? 1 : 0);
        }
    }

    // count of set cells in [x0,x1) x [y0,y1), caller keeps ranges in-domain
    std::int64_t count(Index x0, Index x1, Index y0 = 0, Index y1 = 1) const {
        if (dim == 1) return p[static_cast<std::size_t>(x1)] - p[static_cast<std::size_t>(x0)];
        return p[static_cast<std::size_t>(y1 * (n + 1) + x1)] - p[static_cast<std::size_t>(y0 * (n + 1) + x1)] -
               p[static_cast<std::size_t>(y1 * (n + 1) + x0)] + p[static_cast<std::size_t>(y0 * (n + 1) + x0)];
    }
};

}  // namespace

std::vector<Cube> whitney_maximal(const Mask& E) {
    std::vector<Cube> out;
    if (E.empty()) return out;
    const int d = E.dim;
    const Index n = E.n;
    PrefixSum P(E);

    int smax = 0;
    while ((Index{9} << (smax + 1)) <= n && smax + 1 <= E.extent) ++smax;
    if ((Index{9} << smax) > n) return out;  // even unit cubes have no room

    // per-scale key sets of selected cubes, for the ancestor test
    std::vector<std::unordered_set<std::int64_t>> picked(static_cast<std::size_t>(smax + 1));

    for (int s = smax; s >= 0; --s) {
        const Index len = Index{1} << s;
        const Index nine = 9 * len;
        for (Index cy = 0; cy + (d == 2 ? len : 0) <= (d == 2 ? n : 0); cy += len) {
            for (Index cx = 0; cx + len <= n; cx += len) {
                // 9L must sit inside the domain
                const Index lx = cx - 4 * len, ly = cy - 4 * len;
                if (lx < 0 || lx + nine > n) continue;
                if (d == 2 && (ly < 0 || ly + nine > n)) continue;
                const std::int64_t want = d == 2 ? nine * nine : nine;
                if (P.count(lx, lx + nine, d == 2 ? ly : 0, d == 2 ? ly + nine : 1) != want) continue;
                bool covered = false;
                for (int t = s + 1; t <= smax && !covered; ++t)
                    covered = picked[static_cast<std::size_t>(t)].count(
                                  cube_key(snap_down(cx, t), d == 2 ? snap_down(cy, t) : 0, t, n)) > 0;
                if (covered) continue;
                picked[static_cast<std::size_t>(s)].insert(cube_key(cx, d == 2 ? cy : 0, s, n));
                out.push_back(d == 2 ? Cube(2, s, cx, cy) : Cube(1, s, cx));
            }
            if (d == 1) break;
        }
    }

    std::sort(out.begin(), out.end(), [](const Cube& a, const Cube& b) {
        if (a.s != b.s) return a.s > b.s;
        if (a.corner[0] != b.corner[0]) return a.corner[0] < b.corner[0];
        return a.corner[1] < b.corner[1];
    });
    return out;
}

namespace {

// shifted per-scale key sets (corners may be negative in principle; members
// are in-domain here, but keep the shift for safety)
struct CubeIndex {
    int smax = -1;
    Index n = 0;
    std::vector<std::unordered_set<std::int64_t>> at;

    explicit CubeIndex(const std::vector<Cube>& cubes, Index n_) : n(n_) {
        for (const auto& c : cubes) smax = std::max(smax, c.s);
        at.assign(static_cast<std::size_t>(smax + 1), {});
        for (const auto& c : cubes)
            at[static_cast<std::size_t>(c.s)].insert(
                cube_key(c.corner[0] + n, c.corner[1] + n, c.s, 4 * n));
    }

    bool contains_cell(Index x, Index y, int dim) const {
        for (int t = 0; t <= smax; ++t)
            if (at[static_cast<std::size_t>(t)].count(
                    cube_key(snap_down(x + n, t), dim == 2 ? snap_down(y + n, t) : snap_down(n, t), t, 4 * n)))
                return true;
        return false;
    }

    bool has(const Cube& c) const {
        if (c.s > smax) return false;
        return at[static_cast<std::size_t>(c.s)].count(
                   cube_key(c.corner[0] + n, c.corner[1] + n, c.s, 4 * n)) > 0;
    }
};

}  // namespace

StoppingValidation validate_stopping(const Cube& top, const std::vector<Cube>& members,
                                     int extent, const std::vector<Cube>* ambient) {
    StoppingValidation res;
    const int d = top.dim;
    const Index n = Index{1} << extent;
    auto fail = [&res](std::string axiom, std::string detail) {
        res.ok = false;
        res.violation = StoppingViolation{std::move(axiom), std::move(detail)};
        return res;
    };

    const Box top3 = dilate(top, 3.0);
    const Box top2 = dilate(top, 2.0);

    // axiom 1a: inside 3Q
    for (const auto& L : members)
        if (!top3.contains_box(L.box()))
            return fail("inside-3Q", L.str() + " not inside 3*" + top.str());

    // axiom 1b: pairwise disjoint. distinct dyadic cubes intersect iff nested,
    // so duplicates and strict ancestors are the only failure modes.
    {
        CubeIndex idx(members, n);
        std::unordered_set<std::int64_t> seen_per_scale;
        std::vector<std::unordered_set<std::int64_t>> seen(static_cast<std::size_t>(idx.smax + 1));
        for (const auto& L : members) {
            auto key = cube_key(L.corner[0] + n, L.corner[1] + n, L.s, 4 * n);
            if (!seen[static_cast<std::size_t>(L.s)].insert(key).second)
                return fail("disjoint", "duplicate member " + L.str());
            for (int t = L.s + 1; t <= idx.smax; ++t) {
                Cube anc(d, t, snap_down(L.corner[0], t), d == 2 ? snap_down(L.corner[1], t) : 0);
                if (idx.has(anc))
                    return fail("disjoint", L.str() + " inside member " + anc.str());
            }
        }
        (void)seen_per_scale;
    }

    // axiom 2: scale gap >= 8 forces disjoint 7-fold dilates
    {
        std::vector<std::vector<const Cube*>> by_scale;
        for (const auto& L : members) {
            if (static_cast<int>(by_scale.size()) <= L.s) by_scale.resize(static_cast<std::size_t>(L.s + 1));
            by_scale[static_cast<std::size_t>(L.s)].push_back(&L);
        }
        const int top_s = static_cast<int>(by_scale.size()) - 1;
        for (int s1 = 0; s1 <= top_s; ++s1)
            for (int s2 = s1 + 8; s2 <= top_s; ++s2)
                for (const Cube* a : by_scale[static_cast<std::size_t>(s1)])
                    for (const Cube* b : by_scale[static_cast<std::size_t>(s2)])
                        if (boxes_intersect(dilate(*a, 7.0), dilate(*b, 7.0)))
                            return fail("separation", a->str() + " ~ " + b->str() +
                                                          " despite scale gap >= 8");
    }

    // axiom 3: shadow containment
    Mask shadow(d, extent);
    for (const auto& L : members) {
        auto [x0, x1] = L.box().cell_range(0);
        x0 = std::max<Index>(x0, 0);
        x1 = std::min<Index>(x1, n - 1);
        Index y0 = 0, y1 = 0;
        if (d == 2) {
            auto [a, b] = L.box().cell_range(1);
            y0 = std::max<Index>(a, 0);
            y1 = std::min<Index>(b, n - 1);
        }
        for (Index y = y0; y <= y1; ++y)
            for (Index x = x0; x <= x1; ++x) shadow.set(x, y);
    }

    std::optional<CubeIndex> amb;
    if (ambient) amb.emplace(*ambient, n);

    for (const auto& L : members) {
        if (!boxes_intersect(dilate(L, 3.0), top2)) continue;
        const Box nine = dilate(L, 9.0);
        auto [x0, x1] = nine.cell_range(0);
        x0 = std::max<Index>(x0, 0);
        x1 = std::min<Index>(x1, n - 1);
        Index y0 = 0, y1 = 0;
        if (d == 2) {
            auto [a, b] = nine.cell_range(1);
            y0 = std::max<Index>(a, 0);
            y1 = std::min<Index>(b, n - 1);
        }
        for (Index y = y0; y <= y1; ++y)
            for (Index x = x0; x <= x1; ++x) {
                if (shadow.get(x, y)) continue;
                // cells not covered by the ambient decomposition are grid-scale
                // fringe and carry no cube that could have been omitted
                if (amb && !amb->contains_cell(x, y, d)) continue;
                return fail("shadow", "cell (" + std::to_string(x) +
                                          (d == 2 ? "," + std::to_string(y) : "") + ") of 9*" +
                                          L.str() + " escapes the shadow");
            }
    }

    res.ok = true;
    res.collection = StoppingCollection{top, members, std::move(shadow)};
    return res;
}

}  // namespace sparsedom
