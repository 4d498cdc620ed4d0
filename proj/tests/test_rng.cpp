#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hnrmi/rng.hpp"

using namespace hnrmi;

TEST_CASE("reproducibility and stream separation") {
    Rng a(123, 4), b(123, 4);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng s0(123, 0), s1(123, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (s0.next_u64() == s1.next_u64()) ++equal;
    CHECK(equal == 0);

    Rng zero_seed(0, 0);  // all-zero state guard
    bool any_nonzero = false;
    for (int i = 0; i < 8; ++i) any_nonzero |= zero_seed.next_u64() != 0;
    CHECK(any_nonzero);
}

TEST_CASE("uniform ranges") {
    Rng rng(7, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);

    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform_int covers its range uniformly") {
    Rng rng(11, 3);
    const int n = 7, draws = 70000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) {
        const int v = rng.uniform_int(n);
        REQUIRE(v >= 0);
        REQUIRE(v < n);
        counts[v] += 1;
    }
    const double expect = static_cast<double>(draws) / n;
    const double se = std::sqrt(expect * (1.0 - 1.0 / n));
    for (int c : counts) CHECK(std::fabs(c - expect) < 5 * se);
}

TEST_CASE("normal moments") {
    Rng rng(5, 9);
    const int draws = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(draws)));
    CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / draws));
}

TEST_CASE("streams are uncorrelated") {
    Rng s0(99, 0), s1(99, 1);
    const int n = 20000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s0.next_double(), y = s1.next_double();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    CHECK(std::fabs(cov / std::sqrt(vx * vy)) < 0.03);
}

TEST_CASE("seed mixing") {
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
