#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "sparsedom/localnorms.hpp"

using namespace sparsedom;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// a collection from the whitney cubes of a random union of intervals
StoppingCollection random_collection(int extent, std::uint64_t seed, int blocks = 3) {
    std::mt19937_64 rng(seed);
    const Index n = Index{1} << extent;
    Mask e(1, extent);
    for (int k = 0; k < blocks; ++k) {
        const Index a = n / 4 + static_cast<Index>(rng() % (n / 2));
        const Index len = 9 + static_cast<Index>(rng() % (n / 8));
        for (Index x = a; x < std::min(a + len, n); ++x) e.set(x);
    }
    auto ws = whitney_maximal(e);
    Cube top(1, extent - 1, 0);  // 3*top = [-n/2, n) covers the sample region
    std::vector<Cube> members;
    const Box triple = dilate(top, 3.0);
    for (const auto& L : ws)
        if (triple.contains_box(L.box())) members.push_back(L);
    auto v = validate_stopping(top, members, extent, &ws);
    REQUIRE(v.ok);
    return *v.collection;
}

GridFunction random_supported(const StoppingCollection& c, int extent, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction h(1, extent);
    const Box triple = dilate(c.top, 3.0);
    for (Index x = 0; x < h.n; ++x)
        if (triple.contains_cell(x)) h.at(x) = u(rng);
    return h;
}

double y_norm_ref(const GridFunction& h, const StoppingCollection& c, double p) {
    double off = 0.0;
    for (Index x = 0; x < h.n; ++x)
        if (!c.shadow.get(x)) off = std::max(off, std::abs(h.at(x)));
    auto M = maximal_function(h, p);
    double sup = 0.0;
    for (const auto& L : c.members) {
        const double lo = L.center(0) - 16.0 * L.side(), hi = L.center(0) + 16.0 * L.side();
        double inf = kInf;
        for (Index x = 0; x < h.n; ++x)
            if (x + 0.5 >= lo && x + 0.5 < hi) inf = std::min(inf, M.at(x));
        if (inf < kInf) sup = std::max(sup, inf);
    }
    return std::max(off, sup);
}

}  // namespace

TEST_SUITE("localnorms") {

TEST_CASE("y_norm with empty collection is the sup norm") {
    Cube top(1, 5, 32);
    auto v = validate_stopping(top, {}, 7);
    REQUIRE(v.ok);
    GridFunction h(1, 7);
    h.at(40) = -3.5;
    h.at(50) = 2.0;
    StoppedFunction sf(h, *v.collection);
    for (double p : {1.0, 2.0, kInf}) CHECK(y_norm(sf, p) == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("y_norm of an indicator is 1") {
    auto c = random_collection(8, 21);
    GridFunction h(1, 8);
    const Box triple = dilate(c.top, 3.0);
    for (Index x = 0; x < h.n; ++x)
        if (triple.contains_cell(x)) h.at(x) = 1.0;
    StoppedFunction sf(h, c);
    for (double p : {1.0, 2.0, 4.0}) {
        const double v = y_norm(sf, p);
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= 1.0 - 1e-12);
    }
}

TEST_CASE("y_norm matches the compositional reference") {
    for (std::uint64_t seed : {31ull, 32ull, 33ull, 34ull}) {
        auto c = random_collection(8, seed);
        auto h = random_supported(c, 8, seed * 7 + 1);
        StoppedFunction sf(h, c);
        for (double p : {1.0, 2.0})
            CHECK(y_norm(sf, p) == doctest::Approx(y_norm_ref(h, c, p)).epsilon(1e-12));
    }
}

TEST_CASE("support enforcement at construction") {
    Cube top(1, 3, 32);  // 3*top = [24, 56)
    auto v = validate_stopping(top, {}, 7);
    GridFunction h(1, 7);
    h.at(100) = 1.0;
    CHECK_THROWS_AS(StoppedFunction(h, *v.collection), std::invalid_argument);
}

TEST_CASE("cz with empty collection returns h untouched") {
    Cube top(1, 5, 32);
    auto v = validate_stopping(top, {}, 7);
    GridFunction h(1, 7);
    h.at(40) = 1.25;
    StoppedFunction sf(h, *v.collection);
    auto cz = cz_decompose(sf, 2.0);
    CHECK(cz.b.pieces.empty());
    for (Index x = 0; x < h.n; ++x) CHECK(cz.g.at(x) == h.at(x));
}

TEST_CASE("cz of a locally constant function has zero bad part") {
    auto c = random_collection(8, 41);
    REQUIRE_FALSE(c.members.empty());
    GridFunction h(1, 8);
    const Box triple = dilate(c.top, 3.0);
    for (Index x = 0; x < h.n; ++x)
        if (triple.contains_cell(x)) h.at(x) = 0.75;
    StoppedFunction sf(h, c);
    auto cz = cz_decompose(sf, 2.0);
    for (const auto& piece : cz.b.pieces)
        for (double v : piece.b.values) CHECK(std::abs(v) <= 1e-14);
    CHECK(cz.g_bound_ok);
    CHECK(cz.b_bound_ok);
}

TEST_CASE("cz reconstruction, zero means, stated bounds") {
    for (std::uint64_t seed : {51ull, 52ull, 53ull, 54ull, 55ull}) {
        auto c = random_collection(8, seed, 4);
        auto h = random_supported(c, 8, seed * 13 + 2);
        StoppedFunction sf(h, c);
        for (double p : {1.0, 2.0}) {
            auto cz = cz_decompose(sf, p);
            auto bsum = cz.b.sum(1, 8);
            for (Index x = 0; x < h.n; ++x)
                CHECK(std::abs(cz.g.at(x) + bsum.at(x) - h.at(x)) <= 1e-12);
            CHECK(cz.b.valid());
            CHECK(cz.g_bound_ok);
            CHECK(cz.b_bound_ok);
            // per-cube averages controlled by the y-norm
            for (const auto& L : c.members)
                CHECK(average(h, p, L) <= std::pow(2.0, 5.0) * cz.y_h * (1 + 1e-12));
        }
    }
}

TEST_CASE("cz is idempotent on the good part") {
    auto c = random_collection(8, 61);
    auto h = random_supported(c, 8, 62);
    StoppedFunction sf(h, c);
    auto cz = cz_decompose(sf, 2.0);
    StoppedFunction gf(cz.g, c);
    auto cz2 = cz_decompose(gf, 2.0);
    for (const auto& piece : cz2.b.pieces)
        for (double v : piece.b.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("orlicz-lorentz norm of zero") {
    SphericalFunction z(2, std::vector<double>(64, 0.0));
    CHECK(orlicz_lorentz_norm(z, 2.0) == 0.0);
}

TEST_CASE("orlicz-lorentz norm of the constant 1 on the circle") {
    SphericalFunction one(2, std::vector<double>(256, 1.0));
    for (double q : {1.0, 2.0, 3.0}) {
        // reference: q (2 pi)^{1/q} * integral_0^1 log(e+t) dt by Simpson
        const int steps = 1 << 14;
        double integral = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double a = static_cast<double>(i) / steps, b = static_cast<double>(i + 1) / steps;
            auto f = [](double t) { return std::log(std::numbers::e + t); };
            integral += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        }
        const double ref = q * std::pow(2.0 * std::numbers::pi, 1.0 / q) * integral;
        CHECK(orlicz_lorentz_norm(one, q) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("orlicz-lorentz norm of the two-point sign function") {
    SphericalFunction sgn(1, {-1.0, 1.0});
    auto F = [](double t) { return (std::numbers::e + t) * std::log(std::numbers::e + t) - t; };
    for (double q : {1.0, 2.0}) {
        const double ref = q * std::pow(2.0, 1.0 / q) * (F(1.0) - F(0.0));
        CHECK(orlicz_lorentz_norm(sgn, q) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK_THROWS_AS(orlicz_lorentz_norm(sgn, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(orlicz_lorentz_norm(sgn, kInf), std::invalid_argument);
}

TEST_CASE("L^q embeds into the orlicz-lorentz space") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> vals(128);
        for (auto& v : vals) v = u(rng);
        SphericalFunction om(2, vals);
        for (double q : {1.0, 2.0, 4.0})
            CHECK(sphere_lq_norm(om, q) <= orlicz_lorentz_norm(om, q) + 1e-8);
    }
}

}  // TEST_SUITE
