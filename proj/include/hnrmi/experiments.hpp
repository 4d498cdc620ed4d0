#pragma once

// Monte Carlo studies comparing the inner spike-and-slab hNRMI against the
// outer (two-component mixture) construction: prior predictive CDF bands,
// credible-interval lengths for the sample mean/median, prior and posterior
// spike-count laws, and the prior variance gap. All studies run
// replicate-parallel with per-replicate RNG streams, so results are
// byte-identical for any worker count.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hnrmi/model.hpp"
#include "hnrmi/sampler.hpp"

namespace hnrmi {

// Which normalized process drives the exchangeable sequence.
struct ProcessConfig {
    std::string family = "stable";  // "stable" | "nig"
    double sigma = 0.5;             // used by "stable"
    double beta = 1.0;              // used by "nig"
};

std::string process_tag(const ProcessConfig& pc);

// Urn over the inner model with spike weight zeta (pass 0 for the diffuse
// sequence used by the outer construction).
std::unique_ptr<PredictiveModel> make_process_urn(const ProcessConfig& pc,
                                                  double zeta);

// Exact inner N0 law for a sample of size n.
ProbTable exact_inner_n0(const ProcessConfig& pc, double zeta, int n);

// Exact prior variance coefficient p of the process.
double process_variance_gap_constant(const ProcessConfig& pc);

// ---- small statistics helpers (shared with the test suite) ----

ProbTable binomial_pmf_table(int n, double p);
double tv_distance(const ProbTable& a, const ProbTable& b);
// Type-7 (linear interpolation of order statistics) quantile; sorts a copy.
double quantile_type7(std::vector<double> values, double prob);

// Runs fn(replicate, rng) for replicate = 0..reps-1 across `workers`
// threads. worker_factory is invoked once per worker (serially, up front)
// and returns the closure that worker runs; per-worker state (model caches,
// scratch buffers) lives inside the closure. The rng passed to replicate r
// is Rng(seed, stream_base + r) regardless of scheduling.
void parallel_replicates(
    int reps, uint64_t seed, uint64_t stream_base, int workers,
    const std::function<std::function<void(int, Rng&)>()>& worker_factory);

// ---- prior predictive CDF band (pointwise quantiles of the ECDF) ----

struct BandReport {
    ProcessConfig process;
    std::string model;  // "inner" | "outer"
    double zeta = 0.0;
    int m = 0, reps = 0;
    std::vector<double> grid;
    std::vector<double> lower, upper;  // pointwise 2.5% / 97.5% quantiles
    std::vector<double> mean_curve;    // analytic F0(x)
};

BandReport prior_band_study(const ProcessConfig& pc, const std::string& model,
                            double zeta, int m, int reps, uint64_t seed,
                            int workers, double grid_lo = -3.0,
                            double grid_hi = 3.0, double grid_step = 0.05);

// ---- credible-interval lengths for sample mean / median ----

struct IntervalCell {
    ProcessConfig process;
    std::string model;       // "inner" | "outer"
    std::string functional;  // "mean" | "median"
    double zeta = 0.0;
    int m = 0, reps = 0;
    double lo = 0.0, hi = 0.0, length = 0.0, se_length = 0.0;
};

// One trajectory batch per model; both functionals are computed from the
// same draws. Returns cells ordered (model, functional).
std::vector<IntervalCell> functional_interval_study(
    const ProcessConfig& pc, double zeta, const std::vector<std::string>& models,
    int m, int reps, uint64_t seed, int workers);

// ---- prior spike-count law ----

struct N0Report {
    ProcessConfig process;
    std::string model;  // "inner" | "outer"
    double zeta = 0.0;
    int m = 0, reps = 0;
    ProbTable exact;      // inner: hNRMI law; outer: Binomial(m, zeta)
    ProbTable histogram;  // empty when reps == 0
    double tv = std::numeric_limits<double>::quiet_NaN();
};

N0Report prior_n0_study(const ProcessConfig& pc, const std::string& model,
                        double zeta, int m, int reps, uint64_t seed, int workers);

// ---- posterior spike proportion given an observed partition ----

struct ObservedSample {
    std::string id;
    int n_spike = 0;                 // observations at the spike atom
    std::vector<int> diffuse_freqs;  // tie structure of the rest

    int n() const {
        int s = n_spike;
        for (int f : diffuse_freqs) s += f;
        return s;
    }
};

// The three conditioning samples of the posterior study: spike proportions
// 0.2, 0.5, 0.8 out of n = 50.
std::vector<ObservedSample> builtin_observed_samples();

struct PosteriorCell {
    ObservedSample sample;
    ProcessConfig process;
    std::string model;  // "inner" | "outer"
    double zeta = 0.0;
    int m = 0, reps = 0;
    double expected_proportion = 0.0;  // E[N0^{(n+m)}] / (n+m)
    double se = 0.0;
    ProbTable n0_histogram;  // law of N0^{(n+m)}
};

PosteriorCell posterior_n0_study(const ObservedSample& sample,
                                 const ProcessConfig& pc, const std::string& model,
                                 double zeta, int m, int reps, uint64_t seed,
                                 int workers);

// ---- prior variance gap (Var P(f) - Var Q(f) for f(x) = x) ----

struct VarianceGapCell {
    ProcessConfig process;
    double zeta = 0.0;
    int traj_len = 0, reps = 0;
    double var_inner = 0.0, var_outer = 0.0;
    double gap = 0.0, se_gap = 0.0;
    double expected_gap = 0.0;  // p * zeta * (1 - zeta)
};

// Estimates Var(P(f)) from trajectory means of length traj_len (the 1/L bias
// is removed with the within-trajectory variance), same for the outer model,
// and reports the difference against the exact p zeta(1-zeta).
VarianceGapCell variance_gap_study(const ProcessConfig& pc, double zeta,
                                   int traj_len, int reps, uint64_t seed,
                                   int workers);

}  // namespace hnrmi
