#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "sparsedom/kernels.hpp"
#include "sparsedom/localnorms.hpp"

using namespace sparsedom;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

SphericalFunction sign_omega() { return SphericalFunction(1, {-1.0, 1.0}); }
}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("cutoff and annulus profile support") {
    CHECK(cutoff_chi(0.0) == 1.0);
    CHECK(cutoff_chi(0.5) == 1.0);
    CHECK(cutoff_chi(1.0) == 0.0);
    CHECK(cutoff_chi(0.75) > 0.0);
    CHECK(cutoff_chi(0.75) < 1.0);

    for (double r = 0.0; r <= 0.249; r += 0.001) CHECK(bump_phi(r) == 0.0);
    for (double r = 1.001; r <= 3.0; r += 0.01) CHECK(bump_phi(r) == 0.0);
    CHECK(bump_phi(0.5) > 0.0);
}

TEST_CASE("partition telescopes to 1 on the guaranteed range") {
    Partition part(1, 12);
    // chi(small) - chi(large) at |x| = 1
    CHECK(part.sum(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, std::ldexp(1.0, 11));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, std::abs(part.sum(u(rng)) - 1.0));
    CHECK(worst <= 1e-10);
    CHECK_THROWS_AS(Partition(0, 4), std::invalid_argument);
}

TEST_CASE("rough kernel stencil hand evaluation, d = 1") {
    auto st = rough_kernel(sign_omega(), 3);
    CHECK(st.at(0) == 0.0);
    for (Index x = -st.half; x <= st.half; ++x) {
        const double expect =
            x == 0 ? 0.0
                   : (x > 0 ? 1.0 : -1.0) * 0.125 * bump_phi(std::abs(static_cast<double>(x)) / 8.0);
        CHECK(st.at(x) == doctest::Approx(expect).epsilon(1e-15));
        if (st.at(x) != 0.0) {
            CHECK(std::abs(x) > 2);
            CHECK(std::abs(x) < 8);
        }
        CHECK(st.at(x) == -st.at(-x));
    }
}

TEST_CASE("rough kernel rejects nonzero-mean omega") {
    SphericalFunction bad(1, {1.0, 1.0});
    CHECK_THROWS_AS(rough_kernel(bad, 2), std::invalid_argument);
    CHECK_NOTHROW(rough_kernel(bad, 2, true));
}

TEST_CASE("rough kernel homogeneity across scales") {
    auto f = rough_family(sign_omega(), 6);
    for (int s = 1; s < 6; ++s) {
        const auto& a = f.at_scale(s);
        const auto& b = f.at_scale(s + 1);
        for (Index x = -a.half; x <= a.half; ++x)
            CHECK(b.at(2 * x) == doctest::Approx(0.5 * a.at(x)).epsilon(1e-15));
    }
}

TEST_CASE("truncated sums of the rough d=1 family approximate 1/x") {
    // sum_s K_s(x) = sign(x)/|x| * sum_s phi(2^{-s}|x|) * |x| * 2^{-s} ... for the
    // dini family of 1/x the reconstruction is exact on covered annuli
    auto f = dini_family(1, [](double x, double) { return x == 0.0 ? 0.0 : 1.0 / x; }, 12);
    CHECK(f.normalization_ok);
    for (Index x = 1; x <= (1 << 11); x = 2 * x + 1) {
        double acc = 0.0;
        for (int s = 1; s <= 12; ++s)
            if (std::abs(x) <= f.at_scale(s).half) acc += f.at_scale(s).at(x);
        CHECK(acc == doctest::Approx(1.0 / static_cast<double>(x)).epsilon(1e-12));
    }
}

TEST_CASE("dini normalization flag") {
    auto big = dini_family(1, [](double x, double) { return x == 0.0 ? 0.0 : 5.0 / x; }, 4);
    CHECK_FALSE(big.normalization_ok);
}

TEST_CASE("br kernel hand evaluation and support") {
    for (int dim : {1, 2}) {
        const double delta = 0.5 * (dim - 1);
        for (int s : {1, 2, 3}) {
            auto st = br_kernel(s, dim);
            CHECK(st.at(0, 0) == 0.0);
            for (Index y = (dim == 2 ? -st.half : 0); y <= (dim == 2 ? st.half : 0); ++y)
                for (Index x = -st.half; x <= st.half; ++x) {
                    const double r = std::hypot(static_cast<double>(x), static_cast<double>(y));
                    if (st.at(x, y) != 0.0) {
                        CHECK(r > std::ldexp(1.0, s - 2));
                        CHECK(r < std::ldexp(1.0, s));
                    }
                    const double expect =
                        (x == 0 && y == 0)
                            ? 0.0
                            : std::ldexp(1.0, -s * dim) * bump_phi(std::ldexp(r, -s)) *
                                  std::cos(2.0 * std::numbers::pi * (r - 0.25 * delta));
                    CHECK(st.at(x, y) == doctest::Approx(expect).epsilon(1e-14));
                }
        }
    }
}

TEST_CASE("br tail profile") {
    auto t = br_tail(2, 5);
    CHECK(t.at(0, 0) == 1.0);
    CHECK(t.at(3, 4) == doctest::Approx(std::pow(6.0, -3.0)).epsilon(1e-15));
}

TEST_CASE("kernel_norm_0 basics") {
    auto zero = dini_family(1, [](double, double) { return 0.0; }, 5);
    CHECK(kernel_norm_0(zero, 2.0) == 0.0);
    CHECK(kernel_norm_0(zero, kInf) == 0.0);

    // d = 1, |Omega| = 1, q = inf: per-scale value 2^s max|K_s|; max over the
    // annulus of phi(2^{-s}x)/2^s times 2^s is the max of phi over the sample set
    auto f = rough_family(sign_omega(), 10);
    double phimax = 0.0;
    for (Index x = 1; x < (1 << 10); ++x)
        phimax = std::max(phimax, bump_phi(std::ldexp(static_cast<double>(x), -10)));
    const double v = kernel_norm_0(f, kInf);
    CHECK(v == doctest::Approx(phimax).epsilon(1e-12));
    // per-scale values agree up to sampling error
    for (int s = 7; s <= 10; ++s) {
        KernelFamily single;
        single.dim = 1;
        single.s_max = 1;
        single.stencils = {f.at_scale(s)};
        single.stencils[0].s = 1;  // keep struct valid; scaling handled below
        double m = 0.0;
        for (double x : f.at_scale(s).v) m = std::max(m, std::abs(x));
        CHECK(std::ldexp(m, s) == doctest::Approx(v).epsilon(1e-2));
    }
    CHECK_THROWS_AS(kernel_norm_0(f, 1.0), std::invalid_argument);
}

TEST_CASE("kernel_norm_1 zero family and definiteness") {
    auto zero = dini_family(1, [](double, double) { return 0.0; }, 6);
    CHECK(kernel_norm_1(zero, kInf, 6) == 0.0);
    auto f = rough_family(sign_omega(), 6);
    CHECK(kernel_norm_1(f, kInf, 6) > 0.0);
}

TEST_CASE("kernel_norm_1 shift modulus decays for the smooth 1/x family") {
    auto f = dini_family(1, [](double x, double) { return x == 0.0 ? 0.0 : 1.0 / x; }, 10);
    // recompute the per-j modulus directly to observe the decay
    std::vector<double> varpi;
    double prev_total = 0.0;
    for (int j = 1; j <= 8; ++j) {
        f.norm_cache.clear();
        const double total = kernel_norm_1(f, kInf, j);
        varpi.push_back(total - prev_total);
        prev_total = total;
    }
    // geometric decay sets in once the shift range leaves the saturation
    // regime of the bump profile; measured onset is j = 3 -> 4
    for (std::size_t j = 3; j + 1 < varpi.size(); ++j)
        if (varpi[j] > 0.0) CHECK(varpi[j + 1] <= 0.75 * varpi[j] + 1e-15);
    CHECK(varpi[3] < varpi[0]);
}

TEST_CASE("omega_split partitions by threshold") {
    std::vector<double> vals(64, 0.5);
    vals[3] = 100.0;
    vals[11] = -40.0;
    SphericalFunction om(2, vals);
    auto [low, high] = omega_split(om, 1.0, 5);  // threshold 32
    for (std::size_t i = 0; i < vals.size(); ++i) {
        CHECK(low.values[i] + high.values[i] == vals[i]);
        if (std::abs(vals[i]) > 32.0)
            CHECK(low.values[i] == 0.0);
        else
            CHECK(high.values[i] == 0.0);
    }
    // below the threshold nothing is clipped
    SphericalFunction small(2, std::vector<double>(16, 1.0));
    auto [l2, h2] = omega_split(small, 0.5, 2);
    for (double v : h2.values) CHECK(v == 0.0);
}

TEST_CASE("spike split sums are controlled by the orlicz-lorentz norm") {
    // lacunary omega: value +-2^k on a 2^{-k}-fraction of the circle
    std::mt19937_64 rng(9);
    const int M = 1 << 10;
    std::vector<double> vals(M, 0.0);
    std::size_t pos = 0;
    for (int k = 1; k <= 6; ++k) {
        const std::size_t cnt = static_cast<std::size_t>(M >> (k + 2));
        for (std::size_t i = 0; i < cnt && pos < vals.size(); ++i, ++pos)
            vals[pos] = (k % 2 ? 1.0 : -1.0) * std::ldexp(1.0, k);
    }
    SphericalFunction om(2, vals);
    om.remove_mean();
    const double q = 2.0;
    for (double delta : {0.25, 0.5, 1.0}) {
        double sum = 0.0;
        for (int j = 1; j <= 40; ++j) {
            auto [low, high] = omega_split(om, delta, j);
            sum += sphere_lq_norm(high, q);
        }
        CHECK(sum <= 16.0 / delta * orlicz_lorentz_norm(om, q));
    }
}

}  // TEST_SUITE
