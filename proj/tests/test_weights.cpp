#include <doctest.h>

#include <cmath>
#include <limits>

#include "sparsedom/forms.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Weight power_weight(int extent, double a, double x0) {
    GridFunction w(1, extent, 0.0);
    for (Index x = 0; x < w.n; ++x)
        w.at(x) = std::pow(1.0 + std::abs(static_cast<double>(x) + 0.5 - x0), a);
    return Weight(std::move(w));
}

// direct enumeration without prefix sums
double ap_ref(const GridFunction& w, double t) {
    double best = 0.0;
    for (Index side = 1; side <= w.n; side <<= 1)
        for (Index x = 0; x + side <= w.n; ++x) {
            double aw = 0.0, as = 0.0;
            for (Index u = x; u < x + side; ++u) {
                aw += w.at(u);
                as += std::pow(w.at(u), 1.0 / (1.0 - t));
            }
            aw /= static_cast<double>(side);
            as /= static_cast<double>(side);
            best = std::max(best, aw * std::pow(as, t - 1.0));
        }
    return best;
}

}  // namespace

TEST_SUITE("weights") {
    TEST_CASE("constant weights have unit constant at every exponent") {
        for (double c : {1.0, 0.25, 17.0}) {
            const Weight w(GridFunction(1, 5, c));
            for (double t : {1.5, 2.0, 4.0})
                CHECK(ap_constant(w, t) == doctest::Approx(1.0).epsilon(1e-12));
        }
        const Weight w2(GridFunction(2, 3, 2.5));
        CHECK(ap_constant(w2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("construction and domain errors") {
        GridFunction bad(1, 3, 1.0);
        bad.at(5) = 0.0;
        CHECK_THROWS(Weight(std::move(bad)));
        const Weight w(GridFunction(1, 3, 1.0));
        CHECK_THROWS(ap_constant(w, 1.0));
        CHECK_THROWS(ap_constant(w, 0.5));
    }

    TEST_CASE("power weights match exhaustive enumeration and grow with |a|") {
        double prev = 1.0;
        for (double a : {0.0, 0.3, 0.6, 0.9}) {
            const Weight w = power_weight(7, a, 64.0);
            const double c = ap_constant(w, 2.0);
            CHECK(c == doctest::Approx(ap_ref(w.w, 2.0)).epsilon(1e-10));
            CHECK(c >= prev - 1e-12);
            prev = c;
        }
        // negative exponents too
        const Weight wm = power_weight(7, -0.9, 64.0);
        const Weight wm3 = power_weight(7, -0.3, 64.0);
        CHECK(ap_constant(wm, 2.0) == doctest::Approx(ap_ref(wm.w, 2.0)).epsilon(1e-10));
        CHECK(ap_constant(wm, 2.0) > ap_constant(wm3, 2.0) - 1e-12);
    }

    TEST_CASE("A-constant is at least 1 and scale invariant") {
        const Weight w = power_weight(6, 0.5, 13.0);
        GridFunction scaled = w.w;
        for (double& v : scaled.values) v *= 7.25;
        const Weight ws(std::move(scaled));
        for (double t : {1.25, 2.0, 3.0}) {
            const double c = ap_constant(w, t);
            CHECK(c >= 1.0 - 1e-12);
            CHECK(ap_constant(ws, t) == doctest::Approx(c).epsilon(1e-10));
        }
    }

    TEST_CASE("classes nest: the constant is non-increasing in t") {
        const Weight w = power_weight(6, 0.8, 32.0);
        double prev = std::numeric_limits<double>::max();
        for (double t : {1.5, 2.0, 3.0, 4.0, 8.0}) {
            const double c = ap_constant(w, t);
            CHECK(c <= prev + 1e-12);
            prev = c;
        }
    }

    TEST_CASE("bound exponents at reference points") {
        double e = 0.0;
        corollary_bound(4.0, 2.0, 1.0, &e);
        CHECK(e == doctest::Approx(1.0).epsilon(1e-15));
        corollary_bound(1.5, kInf, 1.0, &e);
        CHECK(e == doctest::Approx(4.0).epsilon(1e-15));
        corollary_bound(2.0, kInf, 1.0, &e);
        CHECK(e == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(corollary_bound(4.0, 2.0, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(corollary_bound(1.5, kInf, 2.0) == doctest::Approx(16.0).epsilon(1e-12));
        CHECK_THROWS(corollary_bound(2.0, 2.0, 1.0));  // t must exceed q' = 2
        CHECK_THROWS(corollary_bound(1.0, kInf, 1.0));
    }

    TEST_CASE("weighted ratio reduces to the unweighted one for w = 1") {
        SphericalFunction om(1, {1.0, -1.0});
        KernelFamily K = rough_family(om, 4);
        GridFunction f(1, 6, 0.0);
        for (Index x = 20; x < 44; ++x) f.at(x) = std::sin(0.3 * static_cast<double>(x));
        const Weight one(GridFunction(1, 6, 1.0));
        const double r = weighted_norm_ratio(K, one, 2.0, f, 0, 4);
        // unit weight: ratio is the plain L^2 operator ratio
        const GridFunction Tf = apply_truncated(K, f, 0, 4);
        CHECK(r == doctest::Approx(lp_norm(Tf, 2.0) / lp_norm(f, 2.0)).epsilon(1e-12));
        CHECK(r > 0.0);
        CHECK_THROWS(weighted_norm_ratio(K, one, 2.0, GridFunction(1, 6, 0.0), 0, 4));
    }

    TEST_CASE("measured ratios respect the bound shape across a power-weight sweep") {
        SphericalFunction om(1, {1.0, -1.0});
        KernelFamily K = rough_family(om, 5);
        GridFunction f(1, 7, 0.0);
        f.at(64) = 1.0;
        const double t = 4.0, q = 2.0;
        double cfit = 0.0;
        for (double a : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            const Weight w = power_weight(7, a, 64.0);
            const double ratio = weighted_norm_ratio(K, w, t, f, 0, 5);
            const double ap = ap_constant(w, t / (q / (q - 1.0)));
            cfit = std::max(cfit, ratio / corollary_bound(t, q, ap));
        }
        // the fitted constant stays modest across the family
        CHECK(cfit > 0.0);
        CHECK(cfit < 8.0);
    }
}
