#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hnrmi/experiments.hpp"
#include "hnrmi/nig.hpp"
#include "hnrmi/stable.hpp"

using namespace hnrmi;

TEST_CASE("statistics helpers") {
    CHECK(quantile_type7({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_type7({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_type7({1, 2, 3, 4}, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_type7({1, 2, 3, 4}, 1.0) == doctest::Approx(4.0));
    CHECK(quantile_type7({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));  // sorts
    CHECK(quantile_type7({5}, 0.3) == doctest::Approx(5.0));

    const ProbTable b = binomial_pmf_table(10, 0.3);
    CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-12));
    double mean = 0.0;
    for (int j = 0; j <= 10; ++j) mean += j * b.at(j);
    CHECK(mean == doctest::Approx(3.0).epsilon(1e-12));
    const ProbTable degenerate = binomial_pmf_table(5, 0.0);
    CHECK(degenerate.at(0) == doctest::Approx(1.0));

    CHECK(tv_distance(b, b) == doctest::Approx(0.0));
    ProbTable d1, d2;
    d1.support_offset = 0;
    d1.probs = {1.0};
    d2.support_offset = 3;
    d2.probs = {1.0};
    CHECK(tv_distance(d1, d2) == doctest::Approx(1.0));
}

TEST_CASE("process plumbing") {
    const ProcessConfig st{"stable", 0.25, 1.0};
    const ProcessConfig ng{"nig", 0.5, 1.0};
    CHECK(process_variance_gap_constant(st) == doctest::Approx(0.75));
    CHECK(process_variance_gap_constant(ng) ==
          doctest::Approx(0.29817368116159704).epsilon(1e-12));

    const ProbTable a = exact_inner_n0(st, 0.5, 4);
    const ProbTable b = stable_n0_distribution({0.25, 0.5}, 4);
    for (int j = 0; j <= 4; ++j) CHECK(a.at(j) == doctest::Approx(b.at(j)));

    const ProbTable c = exact_inner_n0(ng, 0.25, 3);
    const ProbTable d = nig_n0_distribution({1.0, 0.25}, 3);
    for (int j = 0; j <= 3; ++j) CHECK(c.at(j) == doctest::Approx(d.at(j)));

    CHECK(make_process_urn(st, 0.25)->zeta() == doctest::Approx(0.25));
    CHECK_THROWS_AS((make_process_urn({"gamma", 0.5, 1.0}, 0.25)), std::exception);
}

TEST_CASE("parallel replicates: scheduling-independent and exception-safe") {
    const int reps = 500;
    auto run = [&](int workers) {
        std::vector<double> out(reps);
        parallel_replicates(reps, 77, 0, workers, [&]() {
            return [&](int r, Rng& rng) { out[r] = rng.next_double(); };
        });
        return out;
    };
    const std::vector<double> w1 = run(1);
    CHECK(run(4) == w1);
    CHECK(run(7) == w1);

    // replicate r sees Rng(seed, stream_base + r)
    Rng direct(77, 3);
    CHECK(w1[3] == direct.next_double());

    CHECK_THROWS_AS(
        parallel_replicates(100, 1, 0, 4,
                            [&]() -> std::function<void(int, Rng&)> {
                                return [](int r, Rng&) {
                                    if (r == 31) throw std::runtime_error("boom");
                                };
                            }),
        std::runtime_error);
}

TEST_CASE("band study is worker-invariant") {
    const ProcessConfig pc{"stable", 0.5, 1.0};
    const BandReport a = prior_band_study(pc, "inner", 0.25, 20, 300, 5, 1);
    const BandReport b = prior_band_study(pc, "inner", 0.25, 20, 300, 5, 4);
    CHECK(a.grid.size() == 121);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.mean_curve == b.mean_curve);
    for (size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(a.lower[i] <= a.upper[i]);
        CHECK(a.lower[i] >= 0.0);
        CHECK(a.upper[i] <= 1.0);
    }
    // analytic mean curve: zeta 1{x >= 0} + (1 - zeta) Phi(x)
    CHECK(a.mean_curve.front() == doctest::Approx(0.75 * 0.0013498980316300945)
                                      .epsilon(1e-9));
    const BandReport o = prior_band_study(pc, "outer", 0.25, 20, 300, 5, 3);
    CHECK(o.mean_curve == a.mean_curve);
}

TEST_CASE("interval study layout and outer degeneracy") {
    const ProcessConfig pc{"stable", 0.5, 1.0};
    const std::vector<std::string> models{"inner", "outer"};
    const std::vector<IntervalCell> cells =
        functional_interval_study(pc, 0.75, models, 50, 2000, 17, 0);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].model == "inner");
    CHECK(cells[0].functional == "mean");
    CHECK(cells[1].functional == "median");
    CHECK(cells[2].model == "outer");
    for (const IntervalCell& c : cells) {
        CHECK(c.length == doctest::Approx(c.hi - c.lo));
        CHECK(c.length >= 0.0);
    }
    // median of 50 outer draws at zeta = 0.75 is 0 essentially surely
    CHECK(cells[3].length == doctest::Approx(0.0));

    const std::vector<IntervalCell> again =
        functional_interval_study(pc, 0.75, models, 50, 2000, 17, 3);
    CHECK(again[0].length == cells[0].length);
    CHECK(again[1].lo == cells[1].lo);
}

TEST_CASE("prior N0 study") {
    const ProcessConfig pc{"stable", 0.5, 1.0};
    // exact-only run
    const N0Report exact_only = prior_n0_study(pc, "inner", 0.25, 10, 0, 1, 1);
    CHECK(exact_only.histogram.probs.empty());
    CHECK(std::isnan(exact_only.tv));
    CHECK(exact_only.exact.sum() == doctest::Approx(1.0).epsilon(1e-9));

    const N0Report mc = prior_n0_study(pc, "inner", 0.25, 10, 20000, 1, 0);
    CHECK(mc.histogram.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mc.tv < 0.02);

    const N0Report outer = prior_n0_study(pc, "outer", 0.3, 12, 20000, 2, 0);
    const ProbTable binom = binomial_pmf_table(12, 0.3);
    for (int j = 0; j <= 12; ++j)
        CHECK(outer.exact.at(j) == doctest::Approx(binom.at(j)).epsilon(1e-12));
    CHECK(outer.tv < 0.02);
}

TEST_CASE("posterior N0 study") {
    const std::vector<ObservedSample> samples = builtin_observed_samples();
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].id == "x1");
    CHECK(samples[0].n_spike == 10);
    CHECK(samples[1].n_spike == 25);
    CHECK(samples[2].n_spike == 40);
    for (const ObservedSample& s : samples) CHECK(s.n() == 50);

    const ProcessConfig pc{"stable", 0.5, 1.0};
    const PosteriorCell outer =
        posterior_n0_study(samples[0], pc, "outer", 0.5, 50, 4000, 23, 0);
    // E[N0^(n+m)] = n0 + m zeta for the outer model
    const double oracle = (10 + 50 * 0.5) / 100.0;
    CHECK(std::fabs(outer.expected_proportion - oracle) < 4 * outer.se);
    CHECK(outer.n0_histogram.sum() == doctest::Approx(1.0).epsilon(1e-12));

    const PosteriorCell inner =
        posterior_n0_study(samples[1], pc, "inner", 0.5, 50, 4000, 23, 0);
    CHECK(inner.n0_histogram.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inner.expected_proportion > 0.4);
    CHECK(inner.expected_proportion < 0.6);

    const PosteriorCell again =
        posterior_n0_study(samples[1], pc, "inner", 0.5, 50, 4000, 23, 4);
    CHECK(again.expected_proportion == inner.expected_proportion);
}

TEST_CASE("variance gap study") {
    const ProcessConfig pc{"stable", 0.5, 1.0};
    const VarianceGapCell cell = variance_gap_study(pc, 0.5, 400, 800, 31, 0);
    CHECK(cell.expected_gap == doctest::Approx(0.5 * 0.5 * 0.5));
    CHECK(std::fabs(cell.gap - cell.expected_gap) < 4 * cell.se_gap);
    CHECK(cell.se_gap > 0.0);

    const VarianceGapCell again = variance_gap_study(pc, 0.5, 400, 800, 31, 3);
    CHECK(again.gap == cell.gap);
    CHECK(again.se_gap == cell.se_gap);

    CHECK_THROWS_AS(variance_gap_study(pc, 1.0, 400, 800, 31, 0), std::exception);
}
