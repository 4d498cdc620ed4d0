#pragma once

// Closed-form partition laws for the spike-and-slab normalized
// inverse-Gaussian process. The natural parameter is beta = c * sqrt(tau);
// all partition quantities depend on (c, tau) only through beta, so the
// implementation fixes c = 1, tau = beta^2. Mixing integrals collapse to
//   rho_{0,q}^{(n)} = sum_{r=0}^{n-1} C(n-1,r) (-1)^r beta^{2r} Gamma(q-2r, beta)
// and their zeta-weighted extensions
//   rho_{m,q}^{(n)} = sum_{i=1}^m (2 zeta)^i Gamma(2m-i) / (Gamma(m+1-i) Gamma(i))
//                     * rho_{0,q+i-1}^{(n)}.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hnrmi/model.hpp"

namespace hnrmi {

struct NigParams {
    double beta;  // c * sqrt(tau), positive
    double zeta;  // spike weight, in [0,1]

    void check() const;
};

// Memoized evaluation of log rho_{0,q}^{(n)} and log rho_{m,q}^{(n)}.
// The alternating rho_0 sum is monitored for cancellation and falls back to
// a direct positive-integrand quadrature when it loses too many digits.
// Grows on demand; not safe for concurrent mutation.
class RhoCache {
public:
    RhoCache(double beta, double zeta);

    double beta() const { return beta_; }
    double zeta() const { return zeta_; }

    // log rho_{0,q}^{(n)}; n >= 1, q >= 1.
    double log_rho0(int n, int q);
    // log rho_{m,q}^{(n)}(zeta); m >= 1. -inf when zeta == 0.
    double log_rho(int m, int q, int n);

private:
    double upper_gamma(int a);  // Gamma(a, beta), integer a of any sign
    double rho0_by_quadrature(int n, int q) const;

    double beta_, zeta_;
    std::unordered_map<int64_t, double> rho0_, rho_;
    std::unordered_map<int, double> gam_;
};

// Split partition probability Pi_{k,j}^{(n)}: spike_index = -1 for the
// no-spike case, otherwise the 0-based position of the spike block.
double nig_log_eppf_split(const NigParams& p, const std::vector<int>& freqs,
                          int spike_index, RhoCache& rho);
double nig_eppf_split(const NigParams& p, const std::vector<int>& freqs,
                      int spike_index);

// Partition probability summed over the spike assignment.
double nig_log_eppf(const NigParams& p, const std::vector<int>& freqs,
                    RhoCache& rho);
double nig_eppf(const NigParams& p, const std::vector<int>& freqs);

// One-step predictive weights (see PredictiveWeights for the layout); ratios
// of rho values at sample sizes n and n+1.
PredictiveWeights nig_predictive(const NigParams& p, const ClusterState& state,
                                 RhoCache& rho);
PredictiveWeights nig_predictive(const NigParams& p, const ClusterState& state);

// Joint law of (K_n, N0) and the N0 marginal.
KnN0Joint nig_kn_n0_joint(const NigParams& p, int n);
ProbTable nig_n0_distribution(const NigParams& p, int n);

// Prior variance coefficient p in Var(P(A)) = p P0(A)(1-P0(A)):
// p = 1/2 - (beta^2 e^beta / 2) Gamma(-1, beta).
double nig_variance_gap_constant(const NigParams& p);

// Generic-engine view of the same process, for cross-validation against the
// closed forms. The xi table is pre-grown to n_max and read-only afterwards;
// calls with block sizes beyond n_max throw.
HnrmiModel make_nig_model(double beta, double zeta, int n_max = 192);

}  // namespace hnrmi
