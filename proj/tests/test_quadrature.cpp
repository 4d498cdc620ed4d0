#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hnrmi/quadrature.hpp"
#include "hnrmi/special.hpp"

using namespace hnrmi;

TEST_CASE("linear adaptive quadrature on (0, inf)") {
    CHECK(integrate_semi_infinite([](double u) { return std::exp(-u); }, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double u) { return u * u * std::exp(-2 * u); },
                                  1e-10) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double u) { return std::exp(-u * u); }, 1e-10) ==
          doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-10));

    // int_0^inf u^{a-1} e^{-u^sigma} du = Gamma(a/sigma) / sigma
    const double a = 2.5, sigma = 0.5;
    const double want = std::exp(log_gamma(a / sigma)) / sigma;
    CHECK(integrate_semi_infinite(
              [&](double u) { return std::pow(u, a - 1) * std::exp(-std::pow(u, sigma)); },
              1e-10) == doctest::Approx(want).epsilon(1e-9));

    CHECK_THROWS_AS(integrate_semi_infinite([](double u) { return 1.0 / (1.0 + u); }),
                    std::runtime_error);
}

TEST_CASE("log-space variant rescales extreme integrands") {
    CHECK(integrate_semi_infinite_log([](double u) { return -u; }, 1e-10) ==
          doctest::Approx(0.0).epsilon(1e-10));
    // e^{1000} * Exponential(1) mass: value overflows linearly, log must not
    CHECK(integrate_semi_infinite_log([](double u) { return 1000.0 - u; }, 1e-10) ==
          doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(integrate_semi_infinite_log([](double u) { return -1000.0 - u; }, 1e-10) ==
          doctest::Approx(-1000.0).epsilon(1e-12));
    // Gamma(n) mass at large n: log int u^{n-1} e^{-u} = log Gamma(n)
    const int n = 120;
    CHECK(integrate_semi_infinite_log([&](double u) { return (n - 1) * std::log(u) - u; },
                                      1e-10) ==
          doctest::Approx(log_gamma(n)).epsilon(1e-9));
    // zero mass comes back as -inf
    CHECK(integrate_semi_infinite_log([](double) {
        return -std::numeric_limits<double>::infinity();
    }) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("family variant shares panels across components") {
    auto log_f = [](double u, double* out) {
        out[0] = -u;                       // total mass 1
        out[1] = std::log(u) - u;          // Gamma(2) = 1
        out[2] = 2 * std::log(u) - u;      // Gamma(3) = 2
        out[3] = -std::numeric_limits<double>::infinity();
    };
    const std::vector<double> r = integrate_semi_infinite_log_family(4, log_f, 1e-10);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r[2] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(r[3] == -std::numeric_limits<double>::infinity());

    // components on very different scales converge together
    auto scales = [](double u, double* out) {
        out[0] = 500.0 - u;
        out[1] = -500.0 + 3 * std::log(u) - 2.0 * u;  // e^{-500} Gamma(4)/16
    };
    const std::vector<double> s = integrate_semi_infinite_log_family(2, scales, 1e-10);
    CHECK(s[0] == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(-500.0 + std::log(6.0 / 16.0)).epsilon(1e-9));
}
