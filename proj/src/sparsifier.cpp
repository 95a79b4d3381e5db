#include "sparsedom/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsedom {

std::vector<Box> SparseCollection::boxes() const {
    std::vector<Box> out;
    out.reserve(tree.size());
    for (const Cube& q : tree) out.push_back(dilate(q, 3.0));
    return out;
}

namespace {

struct CellRect {
    Index x0, x1, y0, y1;  // inclusive, empty if x0 > x1
    bool empty() const { return x0 > x1 || y0 > y1; }
};

CellRect clip_cells(const Box& b, int dim, Index n) {
    auto [x0, x1] = b.cell_range(0);
    CellRect r{std::max<Index>(x0, 0), std::min<Index>(x1, n - 1), 0, 0};
    if (dim == 2) {
        auto [y0, y1] = b.cell_range(1);
        r.y0 = std::max<Index>(y0, 0);
        r.y1 = std::min<Index>(y1, n - 1);
    }
    return r;
}

}  // namespace

Mask exceptional_set(const Cube& Q, const GridFunction& f1, const GridFunction& f2, double p1,
                     double p2, double lambda) {
    if (!(lambda > 1.0)) throw std::invalid_argument("exceptional_set: lambda must exceed 1");
    for (double p : {p1, p2})
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("exceptional_set: exponents must lie in [1, inf)");
    const Box q3 = dilate(Q, 3.0);
    Mask out(f1.dim, f1.extent);
    const CellRect r = clip_cells(q3, f1.dim, f1.n);
    if (r.empty()) return out;
    const GridFunction* fs[2] = {&f1, &f2};
    const double ps[2] = {p1, p2};
    for (int j = 0; j < 2; ++j) {
        const double avg = average(*fs[j], ps[j], q3);
        if (avg == 0.0) continue;
        const GridFunction m = maximal_function_windowed(*fs[j], ps[j], q3, q3);
        for (Index y = r.y0; y <= r.y1; ++y)
            for (Index x = r.x0; x <= r.x1; ++x)
                if (m.at(x, y) > lambda * avg) out.set(x, y);
    }
    return out;
}

namespace {

void mask_or_assign(Mask& acc, const Mask& m) {
    for (std::size_t i = 0; i < acc.bits.size(); ++i) acc.bits[i] |= m.bits[i];
}

bool neighbor_scales_ok(const std::vector<Cube>& cubes) {
    for (std::size_t i = 0; i < cubes.size(); ++i)
        for (std::size_t j = i + 1; j < cubes.size(); ++j)
            if (boxes_intersect(dilate(cubes[i], 7.0), dilate(cubes[j], 7.0)) &&
                std::abs(cubes[i].s - cubes[j].s) >= 8)
                return false;
    return true;
}

SparsifyResult run_once(const GridFunction& f1, const GridFunction& f2, double p1, double p2,
                        double lambda) {
    SparsifyResult res;
    SparseCollection& col = res.collection;
    IterationCertificate& cert = res.certificate;
    col.dim = f1.dim;
    col.extent = f1.extent;
    cert.lambda = lambda;

    std::vector<Cube> current = {Cube(f1.dim, f1.extent, 0, 0)};
    int level = 0;
    while (!current.empty()) {
        Mask E(f1.dim, f1.extent);
        for (const Cube& Q : current)
            mask_or_assign(E, exceptional_set(Q, f1, f2, p1, p2, lambda));

        double max_ratio = 0.0;
        for (const Cube& Q : current) {
            const double ratio = static_cast<double>(mask_count_in_box(E, Q.box())) /
                                 static_cast<double>(Q.box().volume());
            max_ratio = std::max(max_ratio, ratio);
        }
        LevelRecord rec;
        rec.level = level;
        rec.cubes = current;
        rec.exceptional = E;
        rec.max_ratio = max_ratio;
        if (max_ratio > 0.5) {
            rec.validated = false;
            cert.levels.push_back(std::move(rec));
            res.error = "a cube lost more than half its measure to the exceptional set";
            cert.failure = res.error;
            return res;
        }

        const std::vector<Cube> whitney = whitney_maximal(E);
        rec.neighbor_ok = neighbor_scales_ok(whitney);
        for (const Cube& Q : current) {
            const Box q3 = dilate(Q, 3.0);
            std::vector<Cube> members;
            for (const Cube& L : whitney) {
                const bool inside = q3.contains_box(L.box());
                const bool meets = boxes_intersect(q3, L.box());
                if (inside != meets) {
                    res.error = "Whitney cube meets a 3-dilate without lying inside it";
                    cert.failure = res.error;
                    cert.levels.push_back(std::move(rec));
                    return res;
                }
                if (inside) members.push_back(L);
            }
            const StoppingValidation val = validate_stopping(Q, members, f1.extent, &whitney);
            if (!val.ok) {
                res.error = "stopping collection rejected (" + val.violation->axiom + "): " +
                            val.violation->detail;
                cert.failure = res.error;
                cert.levels.push_back(std::move(rec));
                return res;
            }
        }
        rec.validated = true;
        cert.levels.push_back(std::move(rec));

        for (const Cube& Q : current) {
            Mask F(f1.dim, f1.extent);
            const CellRect r = clip_cells(Q.box(), f1.dim, f1.n);
            for (Index y = r.y0; y <= r.y1; ++y)
                for (Index x = r.x0; x <= r.x1; ++x)
                    if (!E.get(x, y)) F.set(x, y);
            col.tree.push_back(Q);
            col.f_sets.push_back(std::move(F));
        }
        col.generations.push_back(current);

        std::vector<Cube> next;
        for (const Cube& L : whitney)
            for (const Cube& Q : current)
                if (cube_subset(L, Q)) {
                    next.push_back(L);
                    break;
                }
        current = std::move(next);
        ++level;
    }

    double eta = 1.0;
    for (std::size_t i = 0; i < col.tree.size(); ++i)
        eta = std::min(eta, static_cast<double>(col.f_sets[i].count()) /
                                static_cast<double>(col.tree[i].box().volume()));
    col.eta = eta;
    res.ok = cert.ok = true;
    return res;
}

}  // namespace

SparsifyResult sparsify(const GridFunction& f1, const GridFunction& f2, double p1, double p2,
                        double lambda, int max_doublings) {
    if (!f1.same_shape(f2)) throw std::invalid_argument("sparsify: shape mismatch");
    if (lambda <= 0.0) lambda = std::pow(2.0, f1.dim + 3);

    if (lp_norm(f1, 1.0) == 0.0 || lp_norm(f2, 1.0) == 0.0) {
        SparsifyResult res;
        res.collection.dim = f1.dim;
        res.collection.extent = f1.extent;
        const Cube q0(f1.dim, f1.extent, 0, 0);
        res.collection.tree = {q0};
        Mask full(f1.dim, f1.extent);
        std::fill(full.bits.begin(), full.bits.end(), std::uint8_t{1});
        res.collection.f_sets.push_back(std::move(full));
        res.collection.generations = {{q0}};
        res.collection.eta = 1.0;
        res.certificate.lambda = lambda;
        res.certificate.ok = true;
        res.ok = true;
        return res;
    }

    SparsifyResult last;
    for (int attempt = 0; attempt <= max_doublings; ++attempt) {
        last = run_once(f1, f2, p1, p2, lambda * std::pow(2.0, attempt));
        last.certificate.doublings = attempt;
        if (last.ok) return last;
    }
    return last;
}

SparsityReport verify_sparsity(const SparseCollection& S) {
    SparsityReport rep;
    if (S.tree.empty() || S.tree.size() != S.f_sets.size()) {
        rep.ok = false;
        rep.witnesses.push_back("empty or inconsistent collection");
        return rep;
    }
    const Index n = Index{1} << S.extent;
    Mask owned(S.dim, S.extent);
    double eta = 1.0;
    for (std::size_t i = 0; i < S.tree.size(); ++i) {
        const Cube& Q = S.tree[i];
        const Mask& F = S.f_sets[i];
        const Box qb = Q.box();
        Index inside = 0;
        const Index rows = S.dim == 2 ? n : 1;
        for (Index y = 0; y < rows; ++y)
            for (Index x = 0; x < n; ++x) {
                if (!F.get(x, y)) continue;
                if (!qb.contains_cell(x, y)) {
                    rep.contained = false;
                    rep.witnesses.push_back("cell of F escapes " + Q.str());
                    continue;
                }
                ++inside;
                if (owned.get(x, y)) {
                    rep.disjoint = false;
                    rep.witnesses.push_back("overlap at cell inside " + Q.str());
                } else {
                    owned.set(x, y);
                }
            }
        eta = std::min(eta, static_cast<double>(inside) / static_cast<double>(qb.volume()));
    }
    rep.eta = eta;
    rep.ok = rep.disjoint && rep.contained && eta >= S.eta - 1e-12;
    return rep;
}

}  // namespace sparsedom
