#include "hnrmi/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hnrmi/nig.hpp"
#include "hnrmi/special.hpp"
#include "hnrmi/stable.hpp"

namespace hnrmi {

namespace {

void check_model_tag(const std::string& model) {
    if (model != "inner" && model != "outer")
        throw std::invalid_argument("model must be \"inner\" or \"outer\"");
}

void check_process(const ProcessConfig& pc) {
    if (pc.family == "stable")
        StableParams{pc.sigma, 0.0}.check();
    else if (pc.family == "nig")
        NigParams{pc.beta, 0.0}.check();
    else
        throw std::invalid_argument("ProcessConfig: family must be \"stable\" or \"nig\"");
}

// F0(x) = zeta 1{x >= x0} + (1 - zeta) Phi(x), with x0 = 0.
double base_cdf(double zeta, double x) {
    return (x >= 0.0 ? zeta : 0.0) + (1.0 - zeta) * std_normal_cdf(x);
}

double sample_median(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t m = v.size();
    if (m % 2 == 1) return v[m / 2];
    return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// Type-7 quantile of R integer-valued order statistics held as counts.
double quantile_type7_from_counts(const std::vector<int64_t>& cnt, int64_t total,
                                  double prob) {
    const double h = (total - 1) * prob;
    const int64_t i = static_cast<int64_t>(std::floor(h));
    const double g = h - i;
    auto order_stat = [&](int64_t rank) {  // 0-based
        int64_t cum = 0;
        for (size_t v = 0; v < cnt.size(); ++v) {
            cum += cnt[v];
            if (cum > rank) return static_cast<double>(v);
        }
        return static_cast<double>(cnt.size() - 1);
    };
    const double lo = order_stat(i);
    return g == 0.0 ? lo : lo + g * (order_stat(i + 1) - lo);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
}

double var_of(const std::vector<double>& v) {  // denominator n-1
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / (v.size() - 1);
}

// Standard error of an estimator via B consecutive replicate batches:
// sd(batch estimates) / sqrt(B).
double batch_se(const std::vector<double>& replicate_values, int batches,
                const std::function<double(const std::vector<double>&)>& estimator) {
    const int R = static_cast<int>(replicate_values.size());
    const int B = std::min(batches, R);
    if (B < 2) return 0.0;
    std::vector<double> est(B);
    for (int b = 0; b < B; ++b) {
        const int lo = static_cast<int>(static_cast<int64_t>(R) * b / B);
        const int hi = static_cast<int>(static_cast<int64_t>(R) * (b + 1) / B);
        std::vector<double> chunk(replicate_values.begin() + lo,
                                  replicate_values.begin() + hi);
        est[b] = estimator(chunk);
    }
    return std::sqrt(var_of(est) / B);
}

ProbTable histogram_table(const std::vector<int>& values, int max_value) {
    ProbTable t;
    t.support_offset = 0;
    t.probs.assign(max_value + 1, 0.0);
    for (int v : values) {
        if (v < 0 || v > max_value)
            throw std::logic_error("histogram_table: value out of range");
        t.probs[v] += 1.0;
    }
    if (!values.empty())
        for (double& p : t.probs) p /= static_cast<double>(values.size());
    return t;
}

UrnState empty_state() { return UrnState{}; }

}  // namespace

std::string process_tag(const ProcessConfig& pc) {
    char buf[64];
    if (pc.family == "stable")
        std::snprintf(buf, sizeof buf, "stable(sigma=%g)", pc.sigma);
    else
        std::snprintf(buf, sizeof buf, "nig(beta=%g)", pc.beta);
    return buf;
}

std::unique_ptr<PredictiveModel> make_process_urn(const ProcessConfig& pc,
                                                  double zeta) {
    check_process(pc);
    if (pc.family == "stable") return make_stable_urn({pc.sigma, zeta});
    return make_nig_urn({pc.beta, zeta});
}

ProbTable exact_inner_n0(const ProcessConfig& pc, double zeta, int n) {
    check_process(pc);
    if (pc.family == "stable") return stable_n0_distribution({pc.sigma, zeta}, n);
    return nig_n0_distribution({pc.beta, zeta}, n);
}

double process_variance_gap_constant(const ProcessConfig& pc) {
    check_process(pc);
    if (pc.family == "stable") return 1.0 - pc.sigma;
    return nig_variance_gap_constant({pc.beta, 0.0});
}

ProbTable binomial_pmf_table(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0)
        throw std::invalid_argument("binomial_pmf_table: bad parameters");
    ProbTable t;
    t.support_offset = 0;
    t.probs.assign(n + 1, 0.0);
    if (p == 0.0) {
        t.probs[0] = 1.0;
        return t;
    }
    if (p == 1.0) {
        t.probs[n] = 1.0;
        return t;
    }
    for (int k = 0; k <= n; ++k)
        t.probs[k] = std::exp(log_binomial(n, k) + k * std::log(p) +
                              (n - k) * std::log1p(-p));
    return t;
}

double tv_distance(const ProbTable& a, const ProbTable& b) {
    const int lo = std::min(a.support_offset, b.support_offset);
    const int hi = std::max(a.support_offset + static_cast<int>(a.probs.size()),
                            b.support_offset + static_cast<int>(b.probs.size()));
    double s = 0.0;
    for (int v = lo; v < hi; ++v) s += std::fabs(a.at(v) - b.at(v));
    return 0.5 * s;
}

double quantile_type7(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile_type7: empty sample");
    if (prob < 0.0 || prob > 1.0)
        throw std::invalid_argument("quantile_type7: prob must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = (values.size() - 1) * prob;
    const size_t i = static_cast<size_t>(std::floor(h));
    const double g = h - i;
    if (g == 0.0 || i + 1 >= values.size()) return values[i];
    return values[i] + g * (values[i + 1] - values[i]);
}

void parallel_replicates(
    int reps, uint64_t seed, uint64_t stream_base, int workers,
    const std::function<std::function<void(int, Rng&)>()>& worker_factory) {
    if (reps <= 0) return;
    int w = workers;
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    w = std::min(w, reps);

    std::vector<std::function<void(int, Rng&)>> fns;
    fns.reserve(w);
    for (int i = 0; i < w; ++i) fns.push_back(worker_factory());

    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (int i = 0; i < w; ++i) {
        threads.emplace_back([&, i]() {
            try {
                for (;;) {
                    const int r = next.fetch_add(1, std::memory_order_relaxed);
                    if (r >= reps) break;
                    Rng rng(seed, stream_base + static_cast<uint64_t>(r));
                    fns[i](r, rng);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

BandReport prior_band_study(const ProcessConfig& pc, const std::string& model,
                            double zeta, int m, int reps, uint64_t seed,
                            int workers, double grid_lo, double grid_hi,
                            double grid_step) {
    check_process(pc);
    check_model_tag(model);
    if (m < 1 || m > 65535) throw std::invalid_argument("prior_band_study: bad m");
    if (reps < 1) throw std::invalid_argument("prior_band_study: reps must be >= 1");
    if (!(grid_step > 0.0) || !(grid_hi > grid_lo))
        throw std::invalid_argument("prior_band_study: bad grid");

    BandReport rep;
    rep.process = pc;
    rep.model = model;
    rep.zeta = zeta;
    rep.m = m;
    rep.reps = reps;
    const int g = static_cast<int>(std::floor((grid_hi - grid_lo) / grid_step + 0.5)) + 1;
    rep.grid.resize(g);
    for (int i = 0; i < g; ++i) rep.grid[i] = grid_lo + i * grid_step;

    // Per replicate and grid point: number of draws <= x. Workers fill
    // disjoint rows; reduction afterwards is order-independent.
    std::vector<uint16_t> counts(static_cast<size_t>(reps) * g);
    const bool inner = model == "inner";
    auto factory = [&]() {
        auto urn = make_process_urn(pc, inner ? zeta : 0.0);
        std::shared_ptr<PredictiveModel> shared(std::move(urn));
        return [&, shared](int r, Rng& rng) {
            SampleResult s =
                inner ? sample_trajectory(*shared, empty_state(), m, rng)
                      : outer_sample_trajectory(*shared, zeta, empty_state(), m, rng);
            std::sort(s.values.begin(), s.values.end());
            uint16_t* row = counts.data() + static_cast<size_t>(r) * g;
            size_t vi = 0;
            for (int i = 0; i < g; ++i) {
                while (vi < s.values.size() && s.values[vi] <= rep.grid[i]) ++vi;
                row[i] = static_cast<uint16_t>(vi);
            }
        };
    };
    parallel_replicates(reps, seed, 0, workers, factory);

    rep.lower.resize(g);
    rep.upper.resize(g);
    rep.mean_curve.resize(g);
    std::vector<int64_t> cnt(m + 1);
    for (int i = 0; i < g; ++i) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (int r = 0; r < reps; ++r)
            ++cnt[counts[static_cast<size_t>(r) * g + i]];
        rep.lower[i] = quantile_type7_from_counts(cnt, reps, 0.025) / m;
        rep.upper[i] = quantile_type7_from_counts(cnt, reps, 0.975) / m;
        rep.mean_curve[i] = base_cdf(zeta, rep.grid[i]);
    }
    return rep;
}

std::vector<IntervalCell> functional_interval_study(
    const ProcessConfig& pc, double zeta, const std::vector<std::string>& models,
    int m, int reps, uint64_t seed, int workers) {
    check_process(pc);
    if (m < 1) throw std::invalid_argument("functional_interval_study: bad m");
    if (reps < 2)
        throw std::invalid_argument("functional_interval_study: reps must be >= 2");

    std::vector<IntervalCell> cells;
    for (size_t mi = 0; mi < models.size(); ++mi) {
        const std::string& model = models[mi];
        check_model_tag(model);
        const bool inner = model == "inner";
        std::vector<double> means(reps), medians(reps);
        auto factory = [&]() {
            auto urn = make_process_urn(pc, inner ? zeta : 0.0);
            std::shared_ptr<PredictiveModel> shared(std::move(urn));
            return [&, shared](int r, Rng& rng) {
                SampleResult s =
                    inner
                        ? sample_trajectory(*shared, empty_state(), m, rng)
                        : outer_sample_trajectory(*shared, zeta, empty_state(), m, rng);
                means[r] = mean_of(s.values);
                medians[r] = sample_median(s.values);
            };
        };
        parallel_replicates(reps, seed, static_cast<uint64_t>(mi) << 32, workers,
                            factory);

        auto make_cell = [&](const std::string& functional,
                             const std::vector<double>& stats) {
            IntervalCell cell;
            cell.process = pc;
            cell.model = model;
            cell.functional = functional;
            cell.zeta = zeta;
            cell.m = m;
            cell.reps = reps;
            cell.lo = quantile_type7(stats, 0.025);
            cell.hi = quantile_type7(stats, 0.975);
            cell.length = cell.hi - cell.lo;
            cell.se_length = batch_se(stats, 20, [](const std::vector<double>& c) {
                return quantile_type7(c, 0.975) - quantile_type7(c, 0.025);
            });
            return cell;
        };
        cells.push_back(make_cell("mean", means));
        cells.push_back(make_cell("median", medians));
    }
    return cells;
}

N0Report prior_n0_study(const ProcessConfig& pc, const std::string& model,
                        double zeta, int m, int reps, uint64_t seed, int workers) {
    check_process(pc);
    check_model_tag(model);
    if (m < 1) throw std::invalid_argument("prior_n0_study: bad m");
    N0Report rep;
    rep.process = pc;
    rep.model = model;
    rep.zeta = zeta;
    rep.m = m;
    rep.reps = reps;
    const bool inner = model == "inner";
    rep.exact = inner ? exact_inner_n0(pc, zeta, m) : binomial_pmf_table(m, zeta);
    if (reps <= 0) return rep;

    std::vector<int> n_spike(reps);
    auto factory = [&]() {
        auto urn = make_process_urn(pc, inner ? zeta : 0.0);
        std::shared_ptr<PredictiveModel> shared(std::move(urn));
        return [&, shared](int r, Rng& rng) {
            SampleResult s =
                inner ? sample_trajectory(*shared, empty_state(), m, rng)
                      : outer_sample_trajectory(*shared, zeta, empty_state(), m, rng);
            n_spike[r] = s.n_spike;
        };
    };
    parallel_replicates(reps, seed, 0, workers, factory);
    rep.histogram = histogram_table(n_spike, m);
    rep.tv = tv_distance(rep.exact, rep.histogram);
    return rep;
}

std::vector<ObservedSample> builtin_observed_samples() {
    return {
        {"x1", 10, {25, 5, 3, 3, 2, 1, 1}},
        {"x2", 25, {10, 5, 3, 3, 2, 1, 1}},
        {"x3", 40, {3, 3, 2, 1, 1}},
    };
}

PosteriorCell posterior_n0_study(const ObservedSample& sample,
                                 const ProcessConfig& pc, const std::string& model,
                                 double zeta, int m, int reps, uint64_t seed,
                                 int workers) {
    check_process(pc);
    check_model_tag(model);
    if (m < 1) throw std::invalid_argument("posterior_n0_study: bad m");
    if (reps < 1) throw std::invalid_argument("posterior_n0_study: reps >= 1");
    if (sample.n_spike < 0 || sample.n() < 1)
        throw std::invalid_argument("posterior_n0_study: bad observed sample");

    const int n = sample.n();
    const int total = n + m;
    const bool inner = model == "inner";

    // Atom values of the diffuse clusters: irrelevant to the spike count,
    // drawn once per study seed for reproducibility of trajectory values.
    const int kd = static_cast<int>(sample.diffuse_freqs.size());
    std::vector<double> atoms(kd);
    Rng atom_rng(mix_seed(seed, 0xA70515ULL), 0);
    for (double& a : atoms) a = atom_rng.normal();

    UrnState start;
    if (inner) {
        std::vector<int> freqs = sample.diffuse_freqs;
        std::vector<double> all_atoms = atoms;
        int spike_index = -1;
        if (sample.n_spike > 0) {
            freqs.push_back(sample.n_spike);
            all_atoms.push_back(0.0);
            spike_index = kd;
        }
        start = make_conditioning_state(freqs, all_atoms, spike_index);
    } else {
        start = make_conditioning_state(sample.diffuse_freqs, atoms, -1);
    }

    std::vector<int> n0_total(reps);
    auto factory = [&]() {
        auto urn = make_process_urn(pc, inner ? zeta : 0.0);
        std::shared_ptr<PredictiveModel> shared(std::move(urn));
        return [&, shared](int r, Rng& rng) {
            SampleResult s = inner
                                 ? sample_trajectory(*shared, start, m, rng)
                                 : outer_sample_trajectory(*shared, zeta, start, m, rng);
            n0_total[r] = sample.n_spike + s.n_spike;
        };
    };
    parallel_replicates(reps, seed, 0, workers, factory);

    PosteriorCell cell;
    cell.sample = sample;
    cell.process = pc;
    cell.model = model;
    cell.zeta = zeta;
    cell.m = m;
    cell.reps = reps;
    cell.n0_histogram = histogram_table(n0_total, total);
    std::vector<double> props(reps);
    for (int r = 0; r < reps; ++r)
        props[r] = static_cast<double>(n0_total[r]) / total;
    cell.expected_proportion = mean_of(props);
    cell.se = std::sqrt(var_of(props) / reps);
    return cell;
}

VarianceGapCell variance_gap_study(const ProcessConfig& pc, double zeta,
                                   int traj_len, int reps, uint64_t seed,
                                   int workers) {
    check_process(pc);
    if (traj_len < 2) throw std::invalid_argument("variance_gap_study: traj_len >= 2");
    if (reps < 4) throw std::invalid_argument("variance_gap_study: reps >= 4");
    if (zeta < 0.0 || zeta >= 1.0)
        throw std::invalid_argument("variance_gap_study: zeta must lie in [0,1)");

    // One trajectory per replicate and model; the trajectory mean estimates
    // P(f), its spread across replicates estimates Var(P(f)) up to a 1/L
    // term removed with the within-trajectory variance.
    std::vector<double> mu_in(reps), s2_in(reps), mu_out(reps), s2_out(reps);
    auto run = [&](bool inner, std::vector<double>& mu, std::vector<double>& s2,
                   uint64_t stream_base) {
        auto factory = [&]() {
            auto urn = make_process_urn(pc, inner ? zeta : 0.0);
            std::shared_ptr<PredictiveModel> shared(std::move(urn));
            return [&, shared](int r, Rng& rng) {
                SampleResult s =
                    inner ? sample_trajectory(*shared, empty_state(), traj_len, rng)
                          : outer_sample_trajectory(*shared, zeta, empty_state(),
                                                    traj_len, rng);
                mu[r] = mean_of(s.values);
                s2[r] = var_of(s.values);
            };
        };
        parallel_replicates(reps, seed, stream_base, workers, factory);
    };
    run(true, mu_in, s2_in, 0);
    run(false, mu_out, s2_out, uint64_t(1) << 32);

    auto var_hat = [&](const std::vector<double>& mu, const std::vector<double>& s2) {
        return var_of(mu) - mean_of(s2) / traj_len;
    };

    VarianceGapCell cell;
    cell.process = pc;
    cell.zeta = zeta;
    cell.traj_len = traj_len;
    cell.reps = reps;
    cell.var_inner = var_hat(mu_in, s2_in);
    cell.var_outer = var_hat(mu_out, s2_out);
    cell.gap = cell.var_inner - cell.var_outer;
    cell.expected_gap = process_variance_gap_constant(pc) * zeta * (1.0 - zeta);

    // Batch SE over aligned replicate chunks of the paired gap estimate.
    const int B = std::min(40, reps / 2);
    std::vector<double> gaps(B);
    for (int b = 0; b < B; ++b) {
        const int lo = static_cast<int>(static_cast<int64_t>(reps) * b / B);
        const int hi = static_cast<int>(static_cast<int64_t>(reps) * (b + 1) / B);
        auto slice = [&](const std::vector<double>& v) {
            return std::vector<double>(v.begin() + lo, v.begin() + hi);
        };
        gaps[b] = (var_of(slice(mu_in)) - mean_of(slice(s2_in)) / traj_len) -
                  (var_of(slice(mu_out)) - mean_of(slice(s2_out)) / traj_len);
    }
    cell.se_gap = std::sqrt(var_of(gaps) / B);
    return cell;
}

}  // namespace hnrmi
