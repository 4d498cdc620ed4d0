#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hnrmi/special.hpp"
#include "hnrmi/stable.hpp"

using namespace hnrmi;

namespace {

std::vector<int> block_sizes(const std::vector<std::vector<int>>& blocks) {
    std::vector<int> freqs;
    freqs.reserve(blocks.size());
    for (const auto& b : blocks) freqs.push_back(static_cast<int>(b.size()));
    return freqs;
}

// Predictive weights recomputed as ratios of split partition probabilities.
void check_predictive_vs_eppf_ratios(const StableParams& p,
                                     const std::vector<int>& freqs, int spike) {
    PhiTable phi(p.sigma, p.zeta);
    const ClusterState st{freqs, spike};
    const PredictiveWeights w = stable_predictive(p, st, phi);
    const double denom = stable_eppf_split(p, freqs, spike);
    const int k = st.k();

    for (int l = 0; l < k; ++l) {
        std::vector<int> grown = freqs;
        grown[l] += 1;
        const double ratio = stable_eppf_split(p, grown, spike) / denom;
        if (l == spike)
            CHECK(w.w_spike == doctest::Approx(ratio).epsilon(1e-10));
        else
            CHECK(w.w_existing[l] == doctest::Approx(ratio).epsilon(1e-10));
    }
    std::vector<int> opened = freqs;
    opened.push_back(1);
    double w_new = stable_eppf_split(p, opened, spike) / denom;
    if (spike < 0)  // fresh draw from the base measure may also open the spike
        w_new += stable_eppf_split(p, opened, k) / denom;
    CHECK(w.w_new == doctest::Approx(w_new).epsilon(1e-10));
    CHECK(w.total() == doctest::Approx(1.0).epsilon(1e-12));
}

}  // namespace

TEST_CASE("parameter domain") {
    CHECK_THROWS_AS((StableParams{0.0, 0.5}.check()), std::exception);
    CHECK_THROWS_AS((StableParams{1.0, 0.5}.check()), std::exception);
    CHECK_THROWS_AS((StableParams{0.5, -0.1}.check()), std::exception);
    CHECK_THROWS_AS((StableParams{0.5, 1.1}.check()), std::exception);
    CHECK_NOTHROW((StableParams{0.5, 0.0}.check()));
    CHECK_NOTHROW((StableParams{0.5, 1.0}.check()));
}

TEST_CASE("phi table values") {
    PhiTable phi(0.5, 0.5);
    CHECK(std::exp(phi.log_phi(2, 1)) == doctest::Approx(0.1875).epsilon(1e-13));
    // phi_{1,q} = zeta Gamma(q) sigma
    for (int q = 1; q <= 6; ++q)
        CHECK(phi.log_phi(1, q) ==
              doctest::Approx(std::log(0.5) + log_gamma(q) + std::log(0.5))
                  .epsilon(1e-12));
    PhiTable zero(0.5, 0.0);
    CHECK(zero.log_phi(3, 2) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("phi triangular identity across the grid") {
    for (double sigma : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double zeta : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            PhiTable phi(sigma, zeta);
            for (int m = 1; m <= 30; ++m)
                for (int q = 1; q <= 30; ++q) {
                    const double ref = phi.log_phi(m + 1, q);
                    const double lhs =
                        phi.log_phi(m, q) + std::log(m + (q - 1) * sigma);
                    const double rhs2 = std::log((1 - zeta) * sigma) +
                                        phi.log_phi(m, q + 1);
                    const double resid =
                        std::fabs(std::exp(lhs - ref) - 1.0 - std::exp(rhs2 - ref));
                    CHECK(resid <= 1e-9);
                }
        }
}

TEST_CASE("partition probabilities, closed form") {
    StableParams p{0.5, 0.5};
    CHECK(stable_eppf_split(p, {2}, 0) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(stable_eppf(p, {2}) == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(stable_eppf(StableParams{0.25, 0.5}, {2, 1}) ==
          doctest::Approx(0.078125).epsilon(1e-13));

    // zeta = 0 reductions
    StableParams d{0.5, 0.0};
    CHECK(stable_eppf(d, {2}) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(stable_eppf(d, {1, 1}) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(stable_eppf_split(d, {2, 1}, 0) == 0.0);
    CHECK(stable_eppf_split(d, {2, 1}, -1) ==
          doctest::Approx(stable_eppf(d, {2, 1})).epsilon(1e-13));

    // zeta = 1: everything sits on the spike
    StableParams s1{0.5, 1.0};
    CHECK(stable_eppf_split(s1, {3}, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stable_eppf_split(s1, {3}, -1) == 0.0);
}

TEST_CASE("partition-sum normalization, n = 5") {
    for (double sigma : {0.25, 0.5, 0.75})
        for (double zeta : {0.0, 0.25, 0.5, 0.75}) {
            StableParams p{sigma, zeta};
            double total = 0.0;
            enumerate_set_partitions(
                5, [&](const std::vector<std::vector<int>>& blocks) {
                    total += stable_eppf(p, block_sizes(blocks));
                });
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("predictive weights") {
    // no spike block: classical stable urn, phi-free
    StableParams p{0.25, 0.5};
    const PredictiveWeights w = stable_predictive(p, ClusterState{{5, 3, 2}, -1});
    CHECK(w.w_new == doctest::Approx(0.075).epsilon(1e-13));
    CHECK(w.w_spike == 0.0);
    CHECK(w.w_existing[0] == doctest::Approx(0.475).epsilon(1e-13));
    CHECK(w.w_existing[1] == doctest::Approx(0.275).epsilon(1e-13));
    CHECK(w.w_existing[2] == doctest::Approx(0.175).epsilon(1e-13));

    // single spike observation: weights sum to 1 by the triangular identity
    const PredictiveWeights w1 =
        stable_predictive(StableParams{0.5, 0.5}, ClusterState{{1}, 0});
    CHECK(w1.total() == doctest::Approx(1.0).epsilon(1e-12));

    // agreement with ratios of split partition probabilities
    check_predictive_vs_eppf_ratios(StableParams{0.5, 0.25}, {2, 1}, 0);
    check_predictive_vs_eppf_ratios(StableParams{0.5, 0.25}, {2, 1}, 1);
    check_predictive_vs_eppf_ratios(StableParams{0.5, 0.25}, {2, 1}, -1);
    check_predictive_vs_eppf_ratios(StableParams{0.25, 0.75}, {4, 2, 2, 1}, 2);
    check_predictive_vs_eppf_ratios(StableParams{0.75, 0.1}, {3, 3, 1}, -1);

    // zeta = 0 with a spike block is an impossible state
    CHECK_THROWS_AS((stable_predictive(StableParams{0.5, 0.0}, ClusterState{{2, 1}, 0})),
                    std::exception);
}

TEST_CASE("joint (K_n, N0) law") {
    const int n = 3;
    StableParams p{0.5, 0.25};
    KnN0Joint joint = stable_kn_n0_joint(p, n);

    std::vector<std::vector<double>> brute(n + 1, std::vector<double>(n + 1, 0.0));
    enumerate_set_partitions(n, [&](const std::vector<std::vector<int>>& blocks) {
        const std::vector<int> freqs = block_sizes(blocks);
        const int k = static_cast<int>(freqs.size());
        brute[k][0] += stable_eppf_split(p, freqs, -1);
        for (int j = 0; j < k; ++j)
            brute[k][freqs[j]] += stable_eppf_split(p, freqs, j);
    });
    double total = 0.0;
    for (int k = 1; k <= n; ++k)
        for (int j = 0; j <= n; ++j) {
            CHECK(joint.at(k, j) == doctest::Approx(brute[k][j]).epsilon(1e-11));
            total += joint.at(k, j);
        }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-11));

    // n = 1 splits (1-zeta, zeta); zeta = 0 concentrates on the j = 0 column
    KnN0Joint one = stable_kn_n0_joint(p, 1);
    CHECK(one.at(1, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(one.at(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
    KnN0Joint diffuse = stable_kn_n0_joint(StableParams{0.5, 0.0}, 4);
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= 4; ++j) CHECK(diffuse.at(k, j) == 0.0);
    CHECK(diffuse.marginal_kn().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("N0 marginal") {
    const ProbTable t = stable_n0_distribution(StableParams{0.5, 0.5}, 3);
    const double want[] = {0.3125, 0.1875, 0.1875, 0.3125};
    for (int j = 0; j <= 3; ++j)
        CHECK(t.at(j) == doctest::Approx(want[j]).epsilon(1e-12));

    const ProbTable zero = stable_n0_distribution(StableParams{0.5, 0.0}, 5);
    CHECK(zero.at(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("variance coefficient") {
    CHECK(stable_variance_gap_constant({0.25, 0.5}) == doctest::Approx(0.75));
    CHECK(stable_variance_gap_constant({0.75, 0.0}) == doctest::Approx(0.25));
}
