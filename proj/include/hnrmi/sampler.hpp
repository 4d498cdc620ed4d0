#pragma once

// Generalized Polya-urn sampling of the exchangeable sequence directed by a
// spike-and-slab hNRMI. Each step draws from the one-step predictive law:
// join an existing cluster, join/create the spike cluster, or open a new
// diffuse cluster whose atom comes from the slab distribution.

#include <functional>
#include <memory>
#include <vector>

#include "hnrmi/model.hpp"
#include "hnrmi/nig.hpp"
#include "hnrmi/rng.hpp"
#include "hnrmi/stable.hpp"

namespace hnrmi {

// One-step predictive law provider. Implementations own whatever caches
// they need; instances are not shared across threads (clone one per worker).
class PredictiveModel {
public:
    virtual ~PredictiveModel() = default;
    virtual PredictiveWeights weights(const ClusterState& state) = 0;
    virtual double zeta() const = 0;
    virtual std::unique_ptr<PredictiveModel> clone() const = 0;
};

std::unique_ptr<PredictiveModel> make_stable_urn(const StableParams& p);
std::unique_ptr<PredictiveModel> make_nig_urn(const NigParams& p);
// Driven by the generic quadrature engine; slow, for validation runs.
std::unique_ptr<PredictiveModel> make_generic_urn(const HnrmiModel& m);

// Urn state together with the atom carried by each cluster.
struct UrnState {
    ClusterState clusters;
    std::vector<double> atoms;  // one per cluster; atoms[spike_index] == x0

    void check() const;
};

// Result of extending the sequence by m observations.
struct SampleResult {
    std::vector<double> values;  // the m new values, in draw order
    int n_spike = 0;             // how many of them sit on the spike atom
    UrnState state;              // state after all draws
};

// Advances the urn by one observation; returns its value. New diffuse atoms
// come from slab(rng); the spike atom is x0.
double urn_step(PredictiveModel& model, UrnState& state, Rng& rng,
                const std::function<double(Rng&)>& slab, double x0 = 0.0);

// Draws m observations continuing from `start` (pass an empty state for a
// prior sample). slab defaults to a standard normal.
SampleResult sample_trajectory(PredictiveModel& model, const UrnState& start,
                               int m, Rng& rng,
                               const std::function<double(Rng&)>& slab = {},
                               double x0 = 0.0);

// Outer spike-and-slab contamination of a diffuse-only sequence: each of the
// m observations independently equals x0 with probability zeta, otherwise it
// is the next value of the urn sequence driven by `diffuse_model` (whose own
// spike weight must be zero).
SampleResult outer_sample_trajectory(PredictiveModel& diffuse_model, double zeta,
                                     const UrnState& start, int m, Rng& rng,
                                     const std::function<double(Rng&)>& slab = {},
                                     double x0 = 0.0);

// Builds the urn state encoding an observed sample: cluster sizes `freqs`
// with given atoms, spike cluster at spike_index (atom forced to x0).
UrnState make_conditioning_state(const std::vector<int>& freqs,
                                 const std::vector<double>& atoms,
                                 int spike_index, double x0 = 0.0);

}  // namespace hnrmi
