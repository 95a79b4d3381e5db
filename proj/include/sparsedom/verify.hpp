#pragma once

#include <string>
#include <vector>

#include "sparsedom/forms.hpp"
#include "sparsedom/kernels.hpp"
#include "sparsedom/localnorms.hpp"
#include "sparsedom/sparsifier.hpp"
#include "sparsedom/sphere.hpp"

namespace sparsedom {

/// One (mu, nu) truncation against the sparse form built for (f1, f2).
struct DominationEntry {
    int mu = 0, nu = 0;
    double form_abs = 0.0;
    double ratio = 0.0;  // form_abs / psf_value
};

struct DominationReport {
    std::string kernel;
    double p1 = 1.0, p2 = 1.0;
    Index n = 0;
    double psf_value = 0.0;
    double lambda = 0.0;
    double eta = 0.0;
    double max_ratio = 0.0;
    std::vector<DominationEntry> entries;
    bool ok = false;
    std::string error;
};

/// Builds the sparse family once, then sweeps every truncation window over
/// the kernel's scale range and records |form| / sparse-form ratios.
DominationReport domination_report(const KernelFamily& K, const GridFunction& f1,
                                   const GridFunction& f2, double p1, double p2);

struct BlowupPoint {
    double p = 0.0;
    double ratio = 0.0;       // max truncation ratio against PSF_{1,p}
    double normalized = 0.0;  // ratio / (p / (p-1))
};

/// The (1, p) sweep: how the domination constant behaves as p drops toward 1,
/// normalized by the conjectured p/(p-1) profile.
std::vector<BlowupPoint> blowup_profile(const KernelFamily& K, const GridFunction& f1,
                                        const GridFunction& f2, const std::vector<double>& ps);

struct LemmaReport {
    double uniform_constant = 0.0;       // localized form vs Y_r x Y_{r'}
    double trivial_constant = 0.0;       // per-gap single-scale size bound
    double cancellation_constant = 0.0;  // both argument orders vs X_1 x Y_{q'}
    int flagged = 0;                     // trials past the sanity ceiling 2^{8d}
    int trials = 0;
};

/// Random (b, h) trials over a fixed stopping collection: empirical constants
/// for the three localized estimates, normalized by |Q|, the localized norms
/// and the applicable kernel norm.
LemmaReport lemma_checks(const KernelFamily& K, const StoppingCollection& Q, int trials,
                         unsigned seed, double q, double r);

struct RemainderReport {
    double direct = 0.0;       // the stopped form evaluated as a difference
    double main_sum = 0.0;     // transposed piecewise representation over b^in
    double remainder = 0.0;    // direct - main_sum
    double bound = 0.0;        // [K]_{0,q} |Q| ||h||_{Y_{q'}} ||b||_{X_{q'}}
    double empirical_c = 0.0;  // |remainder| / bound (0 when bound is 0)
};

/// Splits the adjoint-side stopped form into its piecewise main sum (over the
/// pieces whose 3-dilate meets 2Q, against the reflected kernel) plus a
/// remainder, and sizes the remainder against the single-scale kernel norm.
RemainderReport adjoint_remainder_check(const KernelFamily& K, const StoppingCollection& Q,
                                        const GridFunction& h, const BadFunction& b, double q,
                                        int mu, int nu);

struct DecayReport {
    std::vector<std::pair<int, double>> profile;  // (j, contribution)
    double total = 0.0;                           // sum of profile entries
    double whole = 0.0;                           // one-shot value, consistency
    double slope = 0.0;      // least-squares slope of log2 |entry| vs j
    double split_sum = 0.0;  // sum_j of the large-part sphere norms
    double orlicz = 0.0;
    double delta = 0.0;
};

/// Scale-gap profile of the stopped form: contribution of kernel scales
/// s = s_L + j grouped by j (pieces at the bottom scale absorb all j past the
/// range). Fits a geometric decay rate on the nonzero entries.
DecayReport decay_gap_profile(const KernelFamily& K, const BadFunction& b, const GridFunction& h,
                              const StoppingCollection& Q, int mu, int nu);

/// Size profile of the unbounded spherical part: per-j norms of the portion of
/// omega above 2^{delta j}, their sum, and the Orlicz-Lorentz comparison norm.
DecayReport decay_split_profile(const SphericalFunction& omega, double q, double delta, int j_max);

/// sup over a dyadic threshold grid of lambda |{ |Tf| > lambda }| / ||f||_1,
/// T the truncated multiscale operator.
double weak11_diagnostic(const KernelFamily& K, const GridFunction& f, int mu, int nu);

}  // namespace sparsedom
