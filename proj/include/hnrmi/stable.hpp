#pragma once

// Closed-form partition laws for the spike-and-slab normalized sigma-stable
// process. Everything here is expressible through generalized factorial
// coefficients and the auxiliary functions
//   phi_{m,q}(zeta) = sum_{i=1}^m zeta^i Gamma(q+i-1) C(m,i;sigma),
// so no quadrature is needed; evaluation stays exact and fast for the
// cluster sizes reached by the Monte Carlo studies.

#include "hnrmi/model.hpp"
#include "hnrmi/special.hpp"

namespace hnrmi {

struct StableParams {
    double sigma;  // stability index, in (0,1)
    double zeta;   // spike weight, in [0,1]

    void check() const;
};

// Cached table of log phi_{m,q}(zeta). The naive ascending recurrence in m
// cancels catastrophically, so the table is filled downward:
//   phi_{m,q} = (phi_{m+1,q} + (1-zeta) sigma phi_{m,q+1}) / (m + (q-1) sigma),
// an all-positive average seeded by direct log-space sums on the far row and
// column. Grows on demand; not safe for concurrent mutation.
class PhiTable {
public:
    PhiTable(double sigma, double zeta, int m_cap = 16, int q_cap = 16);

    double sigma() const { return sigma_; }
    double zeta() const { return zeta_; }

    // log phi_{m,q}(zeta); m >= 1, q >= 1. -inf when zeta == 0.
    double log_phi(int m, int q);

private:
    void fill(int m_cap, int q_cap);
    double direct_log_phi(int m, int q);

    double sigma_, zeta_;
    int m_cap_ = 0, q_cap_ = 0;
    std::vector<std::vector<double>> lphi_;  // [m][q], valid for 1<=m<=m_cap_+1, 1<=q<=q_cap_+1
    GenFactTable gft_;
};

// Split partition probability Pi_{k,j}^{(n)}: spike_index = -1 for the
// no-spike case, otherwise the 0-based position of the spike block.
double stable_log_eppf_split(const StableParams& p, const std::vector<int>& freqs,
                             int spike_index, PhiTable& phi);
double stable_eppf_split(const StableParams& p, const std::vector<int>& freqs,
                         int spike_index);

// Partition probability summed over the spike assignment.
double stable_log_eppf(const StableParams& p, const std::vector<int>& freqs,
                       PhiTable& phi);
double stable_eppf(const StableParams& p, const std::vector<int>& freqs);

// One-step predictive weights (see PredictiveWeights for the layout).
// Without a spike block these are the classical stable urn weights and do
// not involve phi at all; with one they are ratios of neighbouring phi
// values.
PredictiveWeights stable_predictive(const StableParams& p, const ClusterState& state,
                                    PhiTable& phi);
PredictiveWeights stable_predictive(const StableParams& p, const ClusterState& state);

// Joint law of (K_n, N0) and the N0 marginal.
KnN0Joint stable_kn_n0_joint(const StableParams& p, int n);
ProbTable stable_n0_distribution(const StableParams& p, int n);

// Prior variance coefficient: Var(P(A)) = (1 - sigma) P0(A)(1 - P0(A)).
double stable_variance_gap_constant(const StableParams& p);

// Generic-engine view of the same process (c = 1, psi(u) = u^sigma), for
// cross-validation against the closed forms. The xi table is pre-grown to
// n_max and read-only afterwards; calls with block sizes beyond n_max throw.
HnrmiModel make_stable_model(double sigma, double zeta, int n_max = 192);

}  // namespace hnrmi
