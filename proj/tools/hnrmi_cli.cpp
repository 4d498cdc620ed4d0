// Command-line interface: exact partition-law queries (eppf, predict,
// n0-dist, kn-dist), urn sampling, and the Monte Carlo comparison studies.
// Every randomized subcommand requires an explicit --seed; given the same
// seed the output is byte-identical for any --workers value.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hnrmi/core.hpp"
#include "hnrmi/experiments.hpp"
#include "hnrmi/nig.hpp"
#include "hnrmi/report.hpp"
#include "hnrmi/sampler.hpp"
#include "hnrmi/stable.hpp"

namespace {

using nlohmann::json;
using namespace hnrmi;

struct ModelOpts {
    std::string family = "stable";
    double sigma = 0.5;
    double c = 1.0;
    double tau = 1.0;
    double zeta = 0.0;
};

void add_model_flags(CLI::App* cmd, ModelOpts& opts) {
    cmd->add_option("--model", opts.family, "Process family: stable or nig")
        ->check(CLI::IsMember({"stable", "nig"}))
        ->capture_default_str();
    cmd->add_option("--sigma", opts.sigma, "Stability index (stable model)")
        ->capture_default_str();
    cmd->add_option("--c", opts.c, "Total mass (nig model)")->capture_default_str();
    cmd->add_option("--tau", opts.tau, "Exponential tilt (nig model)")
        ->capture_default_str();
    cmd->add_option("--zeta", opts.zeta, "Spike weight in the base measure")
        ->capture_default_str();
}

ProcessConfig to_process(const ModelOpts& o) {
    ProcessConfig pc;
    pc.family = o.family;
    pc.sigma = o.sigma;
    pc.beta = o.c * std::sqrt(o.tau);
    return pc;
}

// spike argument: 0 = no spike block, j >= 1 = block j (1-based) is the spike.
int to_spike_index(int spike, size_t k) {
    if (spike < 0 || static_cast<size_t>(spike) > k)
        throw CLI::ValidationError("--spike", "must lie in 0..k");
    return spike - 1;
}

void require_assert(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("internal assertion failed: " + what);
}

int cmd_eppf(const ModelOpts& opts, const std::vector<int>& freqs, int spike,
             bool split) {
    const int si = to_spike_index(spike, freqs.size());
    double value, log_value;
    if (opts.family == "stable") {
        StableParams p{opts.sigma, opts.zeta};
        PhiTable phi(p.sigma, p.zeta);
        log_value = split ? stable_log_eppf_split(p, freqs, si, phi)
                          : stable_log_eppf(p, freqs, phi);
    } else {
        NigParams p{opts.c * std::sqrt(opts.tau), opts.zeta};
        RhoCache rho(p.beta, p.zeta);
        log_value = split ? nig_log_eppf_split(p, freqs, si, rho)
                          : nig_log_eppf(p, freqs, rho);
    }
    value = std::exp(log_value);
    std::printf("eppf %.17g\nlog_eppf %.17g\n", value, log_value);
    return 0;
}

int cmd_predict(const ModelOpts& opts, const std::vector<int>& freqs, int spike) {
    ClusterState state{freqs, to_spike_index(spike, freqs.size())};
    PredictiveWeights w;
    if (opts.family == "stable")
        w = stable_predictive({opts.sigma, opts.zeta}, state);
    else
        w = nig_predictive({opts.c * std::sqrt(opts.tau), opts.zeta}, state);
    require_assert(std::fabs(w.total() - 1.0) < 1e-9, "predictive weights sum to 1");
    for (size_t l = 0; l < w.w_existing.size(); ++l)
        std::printf("cluster %zu (size %d)%s %.17g\n", l + 1, freqs[l],
                    static_cast<int>(l) == state.spike_index ? " [spike]" : "",
                    static_cast<int>(l) == state.spike_index ? w.w_spike
                                                             : w.w_existing[l]);
    std::printf("new %.17g\ntotal %.17g\n", w.w_new, w.total());
    return 0;
}

void print_table_csv(std::ostream& out, const ProbTable& t, const char* index_name) {
    out << index_name << ",p\n";
    char buf[40];
    for (size_t i = 0; i < t.probs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", t.probs[i]);
        out << (t.support_offset + static_cast<int>(i)) << ',' << buf << '\n';
    }
}

int cmd_dist(const ModelOpts& opts, int n, bool kn, const std::string& out_path) {
    const ProcessConfig pc = to_process(opts);
    KnN0Joint joint;
    if (pc.family == "stable")
        joint = stable_kn_n0_joint({pc.sigma, opts.zeta}, n);
    else
        joint = nig_kn_n0_joint({pc.beta, opts.zeta}, n);
    const ProbTable t = kn ? joint.marginal_kn() : joint.marginal_n0();
    require_assert(std::fabs(t.sum() - 1.0) < 1e-8, "distribution sums to 1");
    if (out_path.empty()) {
        print_table_csv(std::cout, t, kn ? "k" : "j");
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        print_table_csv(out, t, kn ? "k" : "j");
    }
    return 0;
}

int cmd_sample(const ModelOpts& opts, const std::vector<int>& freqs, int spike,
               int m, int reps, uint64_t seed, const std::string& out_path) {
    const ProcessConfig pc = to_process(opts);
    UrnState start;
    if (!freqs.empty()) {
        const int si = to_spike_index(spike, freqs.size());
        std::vector<double> atoms(freqs.size());
        Rng atom_rng(mix_seed(seed, 0xA70515ULL), 0);
        for (double& a : atoms) a = atom_rng.normal();
        start = make_conditioning_state(freqs, atoms, si);
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out_path);
        out = &file;
    }
    *out << "replicate\tstep\tvalue\tis_spike\tcluster\n";
    char buf[40];
    for (int r = 0; r < reps; ++r) {
        Rng rng(seed, static_cast<uint64_t>(r));
        auto urn = make_process_urn(pc, opts.zeta);
        UrnState st = start;
        for (int step = 0; step < m; ++step) {
            std::vector<int> before = st.clusters.freqs;
            const double v = urn_step(*urn, st, rng, {}, 0.0);
            int cluster = st.clusters.k() - 1;  // new block unless one grew
            for (size_t i = 0; i < before.size(); ++i)
                if (st.clusters.freqs[i] != before[i]) {
                    cluster = static_cast<int>(i);
                    break;
                }
            const int is_spike = cluster == st.clusters.spike_index ? 1 : 0;
            std::snprintf(buf, sizeof buf, "%.17g", v);
            *out << r << '\t' << step << '\t' << buf << '\t' << is_spike << '\t'
                 << cluster + 1 << '\n';
        }
    }
    return 0;
}

struct ExperimentOpts {
    std::string study;
    std::string out_dir = "out";
    std::string format = "csv";
    std::string config_path;
    uint64_t seed = 0;
    int reps = -1;  // -1: per-study default
    int workers = 0;
};

struct StudyConfig {
    std::string family = "stable";
    std::vector<double> sigmas{0.25, 0.5, 0.75};
    std::vector<double> betas{1.0};
    std::vector<double> zetas;
    std::vector<std::string> models{"inner", "outer"};
    int m = 50;
    int reps = 0;
    int traj_len = 2000;
};

StudyConfig load_config(const ExperimentOpts& opts, std::vector<double> default_zetas,
                        int default_reps) {
    StudyConfig cfg;
    cfg.zetas = std::move(default_zetas);
    cfg.reps = opts.reps > 0 ? opts.reps : default_reps;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw std::runtime_error("cannot open " + opts.config_path);
        json j = json::parse(in);
        if (j.contains("family")) cfg.family = j["family"].get<std::string>();
        if (j.contains("sigmas")) cfg.sigmas = j["sigmas"].get<std::vector<double>>();
        if (j.contains("betas")) cfg.betas = j["betas"].get<std::vector<double>>();
        if (j.contains("zetas")) cfg.zetas = j["zetas"].get<std::vector<double>>();
        if (j.contains("models"))
            cfg.models = j["models"].get<std::vector<std::string>>();
        if (j.contains("m")) cfg.m = j["m"].get<int>();
        if (j.contains("reps") && opts.reps <= 0) cfg.reps = j["reps"].get<int>();
        if (j.contains("traj_len")) cfg.traj_len = j["traj_len"].get<int>();
    }
    return cfg;
}

std::vector<ProcessConfig> config_processes(const StudyConfig& cfg) {
    std::vector<ProcessConfig> pcs;
    if (cfg.family == "stable") {
        for (double s : cfg.sigmas) pcs.push_back({"stable", s, 1.0});
    } else {
        for (double b : cfg.betas) pcs.push_back({"nig", 0.5, b});
    }
    return pcs;
}

std::string num_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

int cmd_experiment(const ExperimentOpts& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    const bool csv = opts.format == "csv" || opts.format == "both";
    const bool svg = opts.format == "svg" || opts.format == "both";
    auto path = [&](const std::string& name) { return opts.out_dir + "/" + name; };
    uint64_t salt = 0;

    if (opts.study == "prior-bands") {
        StudyConfig cfg = load_config(opts, {0.0, 0.25, 0.5, 0.75}, 100000);
        for (const ProcessConfig& pc : config_processes(cfg))
            for (double zeta : cfg.zetas)
                for (const std::string& model : cfg.models) {
                    BandReport rep =
                        prior_band_study(pc, model, zeta, cfg.m, cfg.reps,
                                         mix_seed(opts.seed, salt++), opts.workers);
                    const std::string stem = "band_" + model + "_" +
                                             num_tag(pc.family == "stable" ? pc.sigma
                                                                           : pc.beta) +
                                             "_z" + num_tag(zeta);
                    if (csv) write_band_csv(path(stem + ".csv"), rep);
                    if (svg) write_band_svg(path(stem + ".svg"), rep);
                    for (size_t i = 0; i < rep.grid.size(); ++i)
                        require_assert(rep.lower[i] <= rep.upper[i] + 1e-12,
                                       "band ordering");
                }
        std::printf("prior-bands written to %s\n", opts.out_dir.c_str());
        return 0;
    }

    if (opts.study == "table1") {
        StudyConfig cfg = load_config(opts, {0.0, 0.25, 0.5, 0.75}, 100000);
        std::vector<IntervalCell> cells;
        for (const ProcessConfig& pc : config_processes(cfg))
            for (double zeta : cfg.zetas) {
                std::vector<IntervalCell> c = functional_interval_study(
                    pc, zeta, cfg.models, cfg.m, cfg.reps,
                    mix_seed(opts.seed, salt++), opts.workers);
                cells.insert(cells.end(), c.begin(), c.end());
            }
        for (const IntervalCell& c : cells)
            require_assert(c.length >= 0.0, "interval length non-negative");
        if (csv) write_interval_csv(path("table1.csv"), cells);
        std::printf("table1 written to %s (%zu cells)\n", opts.out_dir.c_str(),
                    cells.size());
        return 0;
    }

    if (opts.study == "fig2") {
        StudyConfig cfg = load_config(opts, {0.25, 0.5, 0.75}, 0);
        for (const ProcessConfig& pc : config_processes(cfg))
            for (double zeta : cfg.zetas)
                for (const std::string& model : cfg.models) {
                    N0Report rep =
                        prior_n0_study(pc, model, zeta, cfg.m, cfg.reps,
                                       mix_seed(opts.seed, salt++), opts.workers);
                    require_assert(std::fabs(rep.exact.sum() - 1.0) < 1e-8,
                                   "exact N0 law sums to 1");
                    const std::string stem = "n0_" + model + "_" +
                                             num_tag(pc.family == "stable" ? pc.sigma
                                                                           : pc.beta) +
                                             "_z" + num_tag(zeta);
                    if (csv) write_n0_csv(path(stem + ".csv"), rep);
                    if (svg) write_n0_svg(path(stem + ".svg"), rep);
                }
        std::printf("fig2 written to %s\n", opts.out_dir.c_str());
        return 0;
    }

    if (opts.study == "table2") {
        StudyConfig cfg = load_config(opts, {0.25, 0.5, 0.75}, 100000);
        std::vector<PosteriorCell> cells;
        for (const ObservedSample& sample : builtin_observed_samples())
            for (const ProcessConfig& pc : config_processes(cfg))
                for (double zeta : cfg.zetas)
                    for (const std::string& model : cfg.models)
                        cells.push_back(posterior_n0_study(
                            sample, pc, model, zeta, cfg.m, cfg.reps,
                            mix_seed(opts.seed, salt++), opts.workers));
        for (const PosteriorCell& c : cells)
            require_assert(std::fabs(c.n0_histogram.sum() - 1.0) < 1e-9,
                           "posterior histogram sums to 1");
        if (csv) write_posterior_csv(path("table2.csv"), cells);
        std::printf("table2 written to %s (%zu cells)\n", opts.out_dir.c_str(),
                    cells.size());
        return 0;
    }

    if (opts.study == "variance-gap") {
        StudyConfig cfg = load_config(opts, {0.25, 0.5}, 4000);
        std::vector<VarianceGapCell> cells;
        for (const ProcessConfig& pc : config_processes(cfg))
            for (double zeta : cfg.zetas)
                cells.push_back(variance_gap_study(pc, zeta, cfg.traj_len, cfg.reps,
                                                   mix_seed(opts.seed, salt++),
                                                   opts.workers));
        if (csv) write_variance_csv(path("variance_gap.csv"), cells);
        for (const VarianceGapCell& c : cells)
            std::printf("sigma/beta=%g zeta=%g gap=%.6f +- %.6f (expected %.6f)\n",
                        c.process.family == "stable" ? c.process.sigma
                                                     : c.process.beta,
                        c.zeta, c.gap, c.se_gap, c.expected_gap);
        return 0;
    }

    throw CLI::ValidationError("--study", "unknown study " + opts.study);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact laws and Monte Carlo studies for spike-and-slab hNRMIs"};
    app.require_subcommand(1);

    ModelOpts opts;
    std::vector<int> freqs;
    int spike = 0;
    int n = 10, m = 50, reps = 1;
    uint64_t seed = 0;
    std::string out_path;
    bool split = false;

    CLI::App* eppf_cmd = app.add_subcommand("eppf", "Partition probability");
    add_model_flags(eppf_cmd, opts);
    eppf_cmd->add_option("--freqs", freqs, "Cluster sizes")
        ->required()
        ->delimiter(',');
    eppf_cmd->add_option("--spike", spike,
                         "Spike block, 1-based (0 = none); with --split selects "
                         "the split probability");
    eppf_cmd->add_flag("--split", split,
                       "Print Pi_{k,j} for the given spike assignment instead of "
                       "the symmetric sum");

    CLI::App* predict_cmd = app.add_subcommand("predict", "Predictive weights");
    add_model_flags(predict_cmd, opts);
    predict_cmd->add_option("--freqs", freqs, "Cluster sizes")
        ->required()
        ->delimiter(',');
    predict_cmd->add_option("--spike", spike, "Spike block, 1-based (0 = none)");

    CLI::App* n0_cmd = app.add_subcommand("n0-dist", "Law of the spike count N0");
    add_model_flags(n0_cmd, opts);
    n0_cmd->add_option("--n", n, "Sample size")->required();
    n0_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI::App* kn_cmd = app.add_subcommand("kn-dist", "Law of the cluster count K_n");
    add_model_flags(kn_cmd, opts);
    kn_cmd->add_option("--n", n, "Sample size")->required();
    kn_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI::App* sample_cmd = app.add_subcommand("sample", "Urn trajectories (TSV)");
    add_model_flags(sample_cmd, opts);
    sample_cmd->add_option("--m", m, "Draws per trajectory")->capture_default_str();
    sample_cmd->add_option("--reps", reps, "Trajectories")->capture_default_str();
    sample_cmd->add_option("--seed", seed, "RNG seed")->required();
    sample_cmd->add_option("--freqs", freqs, "Conditioning cluster sizes")
        ->delimiter(',');
    sample_cmd->add_option("--spike", spike,
                           "Conditioning spike block, 1-based (0 = none)");
    sample_cmd->add_option("--out", out_path, "TSV output path (default stdout)");

    ExperimentOpts ex;
    CLI::App* exp_cmd = app.add_subcommand("experiment", "Comparison studies");
    exp_cmd
        ->add_option("--study", ex.study,
                     "prior-bands | table1 | fig2 | table2 | variance-gap")
        ->required()
        ->check(CLI::IsMember(
            {"prior-bands", "table1", "fig2", "table2", "variance-gap"}));
    exp_cmd->add_option("--seed", ex.seed, "Master RNG seed")->required();
    exp_cmd->add_option("--reps", ex.reps, "Replicates (default per study)");
    exp_cmd->add_option("--workers", ex.workers, "Worker threads (0 = hardware)");
    exp_cmd->add_option("--out", ex.out_dir, "Output directory")
        ->capture_default_str();
    exp_cmd->add_option("--format", ex.format, "csv | svg | both")
        ->check(CLI::IsMember({"csv", "svg", "both"}))
        ->capture_default_str();
    exp_cmd->add_option("--config", ex.config_path, "JSON config overriding defaults");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eppf_cmd->parsed()) return cmd_eppf(opts, freqs, spike, split);
        if (predict_cmd->parsed()) return cmd_predict(opts, freqs, spike);
        if (n0_cmd->parsed()) return cmd_dist(opts, n, false, out_path);
        if (kn_cmd->parsed()) return cmd_dist(opts, n, true, out_path);
        if (sample_cmd->parsed())
            return cmd_sample(opts, freqs, spike, m, reps, seed, out_path);
        if (exp_cmd->parsed()) return cmd_experiment(ex);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
