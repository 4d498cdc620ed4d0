#pragma once

// Model-independent description of a homogeneous NRMI whose base measure
// carries an atom ("spike") of weight zeta alongside a diffuse component.
// Everything downstream (partition probabilities, predictive weights, urn
// samplers) is driven by the three Levy-side callbacks below; the stable and
// inverse-Gaussian specialisations also ship closed forms that bypass them.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnrmi {

struct HnrmiModel {
    double c = 1.0;     // total mass of the Levy intensity
    double zeta = 0.0;  // base-measure weight of the spike atom

    // Laplace exponent psi(u) = int (1 - e^{-us}) rho(s) ds.
    std::function<double(double)> psi;

    // log of tau_q(u) = int s^q e^{-us} rho(s) ds, q >= 1.
    std::function<double(int, double)> log_tau;

    // log of xi_{n,i}(u): the coefficient functions appearing when a block
    // of n observations sits on the spike atom, 1 <= i <= n.
    std::function<double(int, int, double)> log_xi;

    // Optional change of variables u = u_of_v(v) that removes endpoint
    // singularities from the mixing integrals; log_dudv(v) = log u'(v).
    // Leave both null to integrate in u directly.
    std::function<double(double)> u_of_v;
    std::function<double(double)> log_dudv;

    std::string label;
};

// Partition state of an exchangeable sample: cluster sizes plus which
// cluster (if any) sits on the spike atom.
struct ClusterState {
    std::vector<int> freqs;
    int spike_index = -1;  // 0-based position in freqs, -1 when absent

    int k() const { return static_cast<int>(freqs.size()); }
    int n() const {
        int s = 0;
        for (int f : freqs) s += f;
        return s;
    }
    bool has_spike() const { return spike_index >= 0; }
    void check() const {
        if (spike_index < -1 || spike_index >= k())
            throw std::invalid_argument("ClusterState: spike_index out of range");
        for (int f : freqs)
            if (f < 1) throw std::invalid_argument("ClusterState: frequencies must be >= 1");
    }
};

// One-step predictive law given a ClusterState. Always sums to one as
// w_new + w_spike + sum(w_existing).
//  - no spike cluster yet: w_spike = 0 and w_new is the probability of
//    drawing afresh from the full base measure (spike atom included);
//  - spike cluster present: w_spike is the probability of landing on the
//    spike atom, w_existing[spike] = 0, and w_new draws from the diffuse
//    part only.
struct PredictiveWeights {
    double w_new = 0.0;
    double w_spike = 0.0;
    std::vector<double> w_existing;

    double total() const {
        double s = w_new + w_spike;
        for (double w : w_existing) s += w;
        return s;
    }
};

// Probability mass function on a contiguous integer range.
struct ProbTable {
    int support_offset = 0;
    std::vector<double> probs;

    double at(int v) const {
        const int i = v - support_offset;
        if (i < 0 || i >= static_cast<int>(probs.size())) return 0.0;
        return probs[static_cast<size_t>(i)];
    }
    double sum() const {
        double s = 0.0;
        for (double p : probs) s += p;
        return s;
    }
};

// Joint law of (K_n, N0): number of clusters and number of observations on
// the spike atom, for a sample of size n. at(k, j) with 1 <= k <= n,
// 0 <= j <= n.
struct KnN0Joint {
    int n = 0;
    std::vector<double> p;  // (k-1) * (n+1) + j

    double at(int k, int j) const {
        if (k < 1 || k > n || j < 0 || j > n) return 0.0;
        return p[static_cast<size_t>(k - 1) * (n + 1) + j];
    }
    ProbTable marginal_n0() const;
    ProbTable marginal_kn() const;  // support_offset 1
};

}  // namespace hnrmi
