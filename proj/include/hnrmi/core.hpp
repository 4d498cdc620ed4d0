#pragma once

// Generic (model-agnostic) evaluation of partition laws for spike-and-slab
// homogeneous NRMIs. Everything reduces to one-dimensional mixing integrals
// of products of the model's tau and xi functions; sums over set partitions
// are folded into composition-convolution dynamic programs so nothing is
// enumerated explicitly. Exact but slower than the closed forms in
// stable.hpp / nig.hpp; intended for moderate n and as the reference the
// specialised code is validated against.

#include <vector>

#include "hnrmi/model.hpp"

namespace hnrmi {

// log Pi_{k,j}^{(n)}(freqs): probability that a sample of size n = sum freqs
// realises one given set partition with these block sizes, with block
// `spike_index` (0-based) on the spike atom, or no spike block when
// spike_index == -1.
double log_eppf_split(const HnrmiModel& model, const std::vector<int>& freqs,
                      int spike_index);
double eppf_split(const HnrmiModel& model, const std::vector<int>& freqs,
                  int spike_index);

// Partition probability ignoring which block (if any) is the spike:
// Pi_{k,0} + sum_j Pi_{k,j}.
double log_eppf(const HnrmiModel& model, const std::vector<int>& freqs);
double eppf(const HnrmiModel& model, const std::vector<int>& freqs);

// One-step predictive weights given the current state, via ratios of split
// partition probabilities evaluated in a single shared quadrature pass.
PredictiveWeights predictive(const HnrmiModel& model, const ClusterState& state);

KnN0Joint kn_n0_joint(const HnrmiModel& model, int n);

// Law of N0 alone (support 0..n).
ProbTable n0_distribution(const HnrmiModel& model, int n);

// Coefficient p in the prior variance identity
//   Var(P(A)) = p * P0(A)(1 - P0(A)),
// namely p = c * int_0^inf u e^{-c psi(u)} tau_2(u) du.
double variance_gap_constant(const HnrmiModel& model);

}  // namespace hnrmi
