#pragma once

#include <string>
#include <vector>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/grid.hpp"

namespace sparsedom {

/// Sparse family witnessing the domination bound: tree cubes Q with pairwise
/// disjoint distinguished sets F_Q, |F_Q| >= eta |Q|. The form is evaluated
/// over the dilates 3Q (boxes()); sparsity is certified on the undilated Q.
struct SparseCollection {
    int dim = 1;
    int extent = 0;
    std::vector<Cube> tree;
    std::vector<Mask> f_sets;  // one per tree cube
    double eta = 0.0;
    std::vector<std::vector<Cube>> generations;  // processed cubes per level

    std::vector<Box> boxes() const;  // the dilates 3Q
};

/// One level of the iteration: the cubes processed, the exceptional set they
/// produced, and the measured density of that set inside each cube.
struct LevelRecord {
    int level = 0;
    std::vector<Cube> cubes;
    Mask exceptional;      // E_{level+1}
    double max_ratio = 0;  // max over cubes of |Q cap E_{level+1}| / |Q|
    bool validated = false;
    bool neighbor_ok = false;
};

struct IterationCertificate {
    std::vector<LevelRecord> levels;
    double lambda = 0.0;  // threshold of the successful run
    int doublings = 0;    // retries spent before success
    bool ok = false;
    std::string failure;
};

struct SparsifyResult {
    SparseCollection collection;
    IterationCertificate certificate;
    bool ok = false;
    std::string error;
};

/// Cells x of 3Q (domain part) where
/// max_j M_{p_j}(f_j 1_{3Q})(x) / <f_j>_{p_j,3Q} > lambda.
/// A factor with f_j vanishing on 3Q contributes ratio 0.
Mask exceptional_set(const Cube& Q, const GridFunction& f1, const GridFunction& f2, double p1,
                     double p2, double lambda);

/// Level-by-level construction: start from the full-domain cube, carve out the
/// exceptional set, take its maximal Whitney cubes, keep the ones inside a
/// current cube, repeat. F_Q = Q minus the next exceptional set. Aborts (and
/// retries with doubled lambda, up to max_doublings) if a stopping collection
/// fails validation or some cube loses more than half its measure.
/// lambda <= 0 selects the default 2^{d+3}.
SparsifyResult sparsify(const GridFunction& f1, const GridFunction& f2, double p1, double p2,
                        double lambda = 0.0, int max_doublings = 6);

struct SparsityReport {
    bool disjoint = true;
    bool contained = true;  // every F_Q inside its Q
    double eta = 0.0;       // exact min |F_Q| / |Q|
    bool ok = false;
    std::vector<std::string> witnesses;
};

/// Independent re-check of the sparse-family invariants.
SparsityReport verify_sparsity(const SparseCollection& S);

}  // namespace sparsedom
