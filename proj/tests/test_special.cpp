#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "hnrmi/special.hpp"

using namespace hnrmi;

namespace {
double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}
}  // namespace

TEST_CASE("log-space helpers") {
    CHECK(rel_err(log_gamma(5.0), std::log(24.0)) < 1e-14);
    CHECK(rel_err(log_gamma(0.5), 0.5 * std::log(M_PI)) < 1e-14);
    CHECK(log_rising(0.5, 0) == 0.0);
    CHECK(rel_err(log_rising(0.5, 3), std::log(0.5 * 1.5 * 2.5)) < 1e-13);
    CHECK(log_factorial(0) == 0.0);
    CHECK(rel_err(log_factorial(5), std::log(120.0)) < 1e-14);
    CHECK(rel_err(log_binomial(6, 3), std::log(20.0)) < 1e-13);
    CHECK(log_binomial(6, 0) == doctest::Approx(0.0));

    const double inf = std::numeric_limits<double>::infinity();
    CHECK(log_add(-inf, -inf) == -inf);
    CHECK(log_add(0.0, -inf) == 0.0);
    CHECK(rel_err(log_add(0.0, 0.0), std::log(2.0)) < 1e-15);
    CHECK(rel_err(log_add(-1000.0, -1001.0), -1000.0 + std::log1p(std::exp(-1.0))) <
          1e-15);
}

TEST_CASE("normal cdf and quantile") {
    CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std_normal_cdf(1.96) == doctest::Approx(0.97500210485177957).epsilon(1e-13));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-12));
    for (double p : {1e-8, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-8})
        CHECK(std_normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("generalized factorial coefficients: direct sum") {
    CHECK(gen_fact_coeff(1, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gen_fact_coeff(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(gen_fact_coeff(3, 0, 0.5) == 0.0);
    CHECK(gen_fact_coeff(0, 0, 0.5) == 1.0);
    // C(n,n;sigma) = sigma^n
    for (int n = 1; n <= 8; ++n)
        CHECK(rel_err(gen_fact_coeff(n, n, 0.3), std::pow(0.3, n)) < 1e-12);
    CHECK_THROWS_AS(gen_fact_coeff(2, 1, 1.5), std::exception);
    CHECK_THROWS_AS(gen_fact_coeff(2, 3, 0.5), std::exception);
}

TEST_CASE("generalized factorial table: recurrence vs direct sum") {
    GenFactTable t2(2, 0.5);
    CHECK(t2.at(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t2.at(2, 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(t2.at(2, 2) == doctest::Approx(0.25).epsilon(1e-13));

    // The direct alternating sum cancels badly for large n, so compare up to
    // its own noise floor: roundoff is proportional to the sum of |terms|.
    const auto abs_term_sum = [](int n, int i, double sigma) {
        double tot = 0.0;
        for (int r = 0; r <= i; ++r) {
            double p = std::exp(log_binomial(i, r) - log_factorial(i));
            for (int j = 0; j < n; ++j) p *= std::fabs(j - r * sigma);
            tot += p;
        }
        return tot;
    };
    for (double sigma : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        GenFactTable t(25, sigma);
        for (int n = 1; n <= 25; ++n)
            for (int i = 1; i <= n; ++i) {
                const double direct = gen_fact_coeff(n, i, sigma);
                const double rec = t.at(n, i);
                const double floor = abs_term_sum(n, i, sigma);
                CHECK(std::fabs(rec - direct) <=
                      1e-12 * (floor + std::fabs(direct)));
            }
    }

    struct Pinned {
        int i;
        double sigma;
        double value;
    };
    const Pinned pinned[] = {
        {1, 0.1, 4.2174306826749020e+22},  {5, 0.1, 1.2556605593484003e+19},
        {13, 0.1, 604134.92734478093},     {25, 0.1, 1.0000000000000014e-25},
        {1, 0.5, 3.5541301750374857e+22},  {5, 0.5, 1.2939386452855149e+21},
        {13, 0.5, 11796451361576.873},     {25, 0.5, 2.9802322387695313e-8},
        {1, 0.9, 3.3542743736791234e+21},  {5, 0.9, 2.0753279203716692e+20},
        {13, 0.9, 28302623271451.063},     {25, 0.9, 0.071789798769185303},
    };
    for (const Pinned& p : pinned) {
        GenFactTable t(25, p.sigma);
        CHECK(rel_err(t.at(25, p.i), p.value) < 1e-12);
    }

    GenFactTable t5(5, 0.75);
    for (int n = 1; n <= 5; ++n)
        for (int i = 1; i <= n; ++i) CHECK(t5.at(n, i) > 0.0);

    // structural zeros and growth
    GenFactTable g(3, 0.5);
    CHECK(g.log_at(2, 0) == -std::numeric_limits<double>::infinity());
    CHECK(g.log_at(2, 3) == -std::numeric_limits<double>::infinity());
    const double before = g.log_at(3, 2);
    g.grow(40);
    CHECK(g.n_max() >= 40);
    CHECK(g.log_at(3, 2) == before);
    CHECK(std::isfinite(g.log_at(40, 17)));
}

TEST_CASE("upper incomplete gamma at integer order") {
    CHECK(upper_inc_gamma_int(1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(upper_inc_gamma_int(0, 1.0) ==
          doctest::Approx(0.21938393439552027).epsilon(1e-13));
    CHECK(upper_inc_gamma_int(-1, 1.0) ==
          doctest::Approx(0.14849550677592205).epsilon(1e-13));
    CHECK(upper_inc_gamma_int(5, 1.0) ==
          doctest::Approx(23.912163676143751).epsilon(1e-13));

    // recurrence Gamma(a+1,z) = a Gamma(a,z) + z^a e^{-z}
    for (int a = -10; a <= 10; ++a)
        for (double z : {0.1, 1.0, 5.0, 10.0}) {
            const double lhs = upper_inc_gamma_int(a + 1, z);
            const double rhs =
                a * upper_inc_gamma_int(a, z) + std::pow(z, a) * std::exp(-z);
            CHECK(std::fabs(lhs - rhs) <=
                  1e-12 * std::max({std::fabs(lhs), std::fabs(rhs), 1e-300}));
        }
    CHECK_THROWS_AS(upper_inc_gamma_int(0, 0.0), std::exception);
    CHECK_THROWS_AS(upper_inc_gamma_int(0, -1.0), std::exception);
}

TEST_CASE("exponential integral E1") {
    CHECK(exp_int_e1(1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-14));
    CHECK(exp_int_e1(0.5) == doctest::Approx(0.55977359477616081).epsilon(1e-14));
    CHECK(exp_int_e1(2.0) == doctest::Approx(0.048900510708061120).epsilon(1e-14));
    CHECK_THROWS_AS(exp_int_e1(0.0), std::exception);
}

TEST_CASE("composition enumeration") {
    std::vector<std::vector<int>> got;
    enumerate_compositions(3, 2, [&](const std::vector<int>& v) { got.push_back(v); });
    CHECK(got == std::vector<std::vector<int>>{{1, 2}, {2, 1}});

    got.clear();
    enumerate_compositions(4, 4, [&](const std::vector<int>& v) { got.push_back(v); });
    CHECK(got == std::vector<std::vector<int>>{{1, 1, 1, 1}});

    for (int n = 1; n <= 8; ++n)
        for (int k = 1; k <= n; ++k) {
            std::set<std::vector<int>> seen;
            int count = 0;
            enumerate_compositions(n, k, [&](const std::vector<int>& v) {
                ++count;
                int s = 0;
                for (int x : v) {
                    CHECK(x >= 1);
                    s += x;
                }
                CHECK(s == n);
                seen.insert(v);
            });
            const double expected = std::exp(log_binomial(n - 1, k - 1));
            CHECK(count == static_cast<int>(std::lround(expected)));
            CHECK(static_cast<int>(seen.size()) == count);
        }
    CHECK_THROWS_AS(enumerate_compositions(3, 0, [](const std::vector<int>&) {}),
                    std::exception);
    CHECK_THROWS_AS(enumerate_compositions(3, 4, [](const std::vector<int>&) {}),
                    std::exception);
}

TEST_CASE("set partition enumeration") {
    const long bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
    for (int n = 1; n <= 8; ++n) {
        long count = 0;
        enumerate_set_partitions(n, [&](const std::vector<std::vector<int>>& blocks) {
            ++count;
            std::set<int> all;
            for (const auto& b : blocks) {
                CHECK(!b.empty());
                for (int e : b) all.insert(e);
            }
            CHECK(static_cast<int>(all.size()) == n);
        });
        CHECK(count == bell[n]);
    }
    CHECK_THROWS_AS(
        enumerate_set_partitions(11, [](const std::vector<std::vector<int>>&) {}),
        std::exception);
}
