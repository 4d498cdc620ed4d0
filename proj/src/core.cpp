#include "hnrmi/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "hnrmi/quadrature.hpp"
#include "hnrmi/special.hpp"

namespace hnrmi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_model(const HnrmiModel& m) {
    if (!m.psi || !m.log_tau || !m.log_xi)
        throw std::invalid_argument("HnrmiModel: psi, log_tau, log_xi must be set");
    if (!(m.c > 0.0)) throw std::invalid_argument("HnrmiModel: c must be positive");
    if (m.zeta < 0.0 || m.zeta > 1.0)
        throw std::invalid_argument("HnrmiModel: zeta must lie in [0,1]");
}

// Integrate a family of log-integrands written in the u variable, applying
// the model's smoothing change of variables when present.
std::vector<double> model_log_integrals(
    const HnrmiModel& m, int dim,
    const std::function<void(double, double*)>& log_f_u, double tol = 1e-10) {
    if (!m.u_of_v)
        return integrate_semi_infinite_log_family(dim, log_f_u, tol);
    auto g = [&](double v, double* out) {
        const double u = m.u_of_v(v);
        if (!(u > 0.0) || !std::isfinite(u)) {
            for (int c = 0; c < dim; ++c) out[c] = kNegInf;
            return;
        }
        log_f_u(u, out);
        const double lj = m.log_dudv(v);
        for (int c = 0; c < dim; ++c)
            if (out[c] > kNegInf) out[c] += lj;
    };
    return integrate_semi_infinite_log_family(dim, g, tol);
}

// log sum_{i=1}^{j} (c zeta)^i xi_{j,i}(u)
double log_spike_block(const HnrmiModel& m, int j, double u) {
    const double lcz = std::log(m.c * m.zeta);
    double acc = kNegInf;
    for (int i = 1; i <= j; ++i)
        acc = log_add(acc, i * lcz + m.log_xi(j, i, u));
    return acc;
}

// log prefactor of Pi_{k,j}: the part of the split partition probability
// outside the mixing integral.
double log_split_prefactor(const HnrmiModel& m, int n, int k, bool spiked) {
    const int q = spiked ? k - 1 : k;  // power of c(1-zeta)
    double lp = -log_gamma(n);
    if (q > 0) lp += q * (std::log(m.c) + std::log1p(-m.zeta));
    return lp;
}

// log of the common factor u^{n-1} e^{-c psi(u)}.
double log_mixing_base(const HnrmiModel& m, int n, double u) {
    return (n - 1) * std::log(u) - m.c * m.psi(u);
}

}  // namespace

double log_eppf_split(const HnrmiModel& model, const std::vector<int>& freqs,
                      int spike_index) {
    require_model(model);
    ClusterState st{freqs, spike_index};
    st.check();
    const int n = st.n();
    const int k = st.k();

    auto log_f = [&](double u, double* out) {
        double lf = log_mixing_base(model, n, u);
        for (int m = 0; m < k; ++m) {
            if (m == spike_index)
                lf += log_spike_block(model, freqs[m], u);
            else
                lf += model.log_tau(freqs[m], u);
        }
        out[0] = lf;
    };
    const double li = model_log_integrals(model, 1, log_f)[0];
    return log_split_prefactor(model, n, k, spike_index >= 0) + li;
}

double eppf_split(const HnrmiModel& model, const std::vector<int>& freqs,
                  int spike_index) {
    return std::exp(log_eppf_split(model, freqs, spike_index));
}

double log_eppf(const HnrmiModel& model, const std::vector<int>& freqs) {
    require_model(model);
    ClusterState st{freqs, -1};
    st.check();
    const int n = st.n();
    const int k = st.k();

    // Component 0: no spike block; component j: block j-1 is the spike.
    auto log_f = [&](double u, double* out) {
        const double base = log_mixing_base(model, n, u);
        std::vector<double> lt(k), ls(k);
        for (int m = 0; m < k; ++m) {
            lt[m] = model.log_tau(freqs[m], u);
            ls[m] = log_spike_block(model, freqs[m], u);
        }
        double all_tau = base;
        for (int m = 0; m < k; ++m) all_tau += lt[m];
        out[0] = all_tau;
        for (int j = 0; j < k; ++j)
            out[j + 1] = all_tau - lt[j] + ls[j];
    };
    const std::vector<double> li = model_log_integrals(model, k + 1, log_f);

    double acc = log_split_prefactor(model, n, k, false) + li[0];
    for (int j = 0; j < k; ++j)
        acc = log_add(acc, log_split_prefactor(model, n, k, true) + li[j + 1]);
    return acc;
}

double eppf(const HnrmiModel& model, const std::vector<int>& freqs) {
    return std::exp(log_eppf(model, freqs));
}

PredictiveWeights predictive(const HnrmiModel& model, const ClusterState& state) {
    require_model(model);
    state.check();
    const int n = state.n();
    const int k = state.k();
    if (n < 1) throw std::invalid_argument("predictive: state must be non-empty");

    // One quadrature pass over: denominator, each cluster bumped by one,
    // and the new-cluster variants.
    //   components: 0 = denominator (size-n state)
    //               1..k = cluster m-1 gets the next observation
    //               k+1 = new diffuse block
    //               k+2 = new spike block (only when none exists yet)
    const bool spiked = state.has_spike();
    const int dim = spiked ? k + 2 : k + 3;

    auto log_f = [&](double u, double* out) {
        std::vector<double> lt(k), lt_up(k);
        double lspike = 0.0, lspike_up = 0.0;
        for (int m = 0; m < k; ++m) {
            if (m == state.spike_index) {
                lspike = log_spike_block(model, state.freqs[m], u);
                lspike_up = log_spike_block(model, state.freqs[m] + 1, u);
                lt[m] = lt_up[m] = 0.0;
            } else {
                lt[m] = model.log_tau(state.freqs[m], u);
                lt_up[m] = model.log_tau(state.freqs[m] + 1, u);
            }
        }
        double prod = spiked ? lspike : 0.0;
        for (int m = 0; m < k; ++m)
            if (m != state.spike_index) prod += lt[m];

        out[0] = log_mixing_base(model, n, u) + prod;
        const double base_up = log_mixing_base(model, n + 1, u);
        for (int m = 0; m < k; ++m) {
            const double swap =
                m == state.spike_index ? lspike_up - lspike : lt_up[m] - lt[m];
            out[m + 1] = base_up + prod + swap;
        }
        out[k + 1] = base_up + prod + model.log_tau(1, u);      // new diffuse
        if (!spiked)
            out[k + 2] = base_up + prod + log_spike_block(model, 1, u);
    };
    const std::vector<double> li = model_log_integrals(model, dim, log_f);

    const double lp_den = log_split_prefactor(model, n, k, spiked);
    const double lden = lp_den + li[0];
    if (!std::isfinite(lden))
        throw std::runtime_error("predictive: state has zero probability");

    PredictiveWeights w;
    w.w_existing.assign(k, 0.0);
    const double lp_same_k = log_split_prefactor(model, n + 1, k, spiked);
    for (int m = 0; m < k; ++m) {
        const double lw = lp_same_k + li[m + 1] - lden;
        if (m == state.spike_index)
            w.w_spike = std::exp(lw);
        else
            w.w_existing[m] = std::exp(lw);
    }
    const double lp_new_diffuse = log_split_prefactor(model, n + 1, k + 1, spiked);
    double lnew = lp_new_diffuse + li[k + 1];
    if (!spiked) {
        const double lp_new_spike = log_split_prefactor(model, n + 1, k + 1, true);
        lnew = log_add(lnew, lp_new_spike + li[k + 2]);
    }
    w.w_new = std::exp(lnew - lden);
    return w;
}

KnN0Joint kn_n0_joint(const HnrmiModel& model, int n) {
    require_model(model);
    if (n < 1) throw std::invalid_argument("kn_n0_joint: n must be >= 1");

    // Component layout: (k, 0) for k = 1..n, then (k, j) for j = 1..n,
    // k = 1..n-j+1.
    std::vector<std::pair<int, int>> comps;
    for (int k = 1; k <= n; ++k) comps.emplace_back(k, 0);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n - j + 1; ++k) comps.emplace_back(k, j);
    const int dim = static_cast<int>(comps.size());

    // A_q(m, u) = sum over ordered compositions of m into q parts of
    // prod tau_{part}(u) / part!, built by convolution; sums over set
    // partitions then reduce to n!/k! * A_k(n, u).
    auto log_f = [&](double u, double* out) {
        std::vector<double> g(n + 1, kNegInf);
        for (int m = 1; m <= n; ++m)
            g[m] = model.log_tau(m, u) - log_factorial(m);
        std::vector<std::vector<double>> la(
            n + 1, std::vector<double>(n + 1, kNegInf));
        la[0][0] = 0.0;
        for (int q = 1; q <= n; ++q)
            for (int m = q; m <= n; ++m) {
                double acc = kNegInf;
                for (int s = 1; s <= m - q + 1; ++s)
                    acc = log_add(acc, g[s] + la[q - 1][m - s]);
                la[q][m] = acc;
            }
        std::vector<double> lsxi(n + 1, kNegInf);
        for (int j = 1; j <= n; ++j) lsxi[j] = log_spike_block(model, j, u);

        const double base = log_mixing_base(model, n, u);
        for (int c = 0; c < dim; ++c) {
            const int k = comps[c].first, j = comps[c].second;
            if (j == 0)
                out[c] = base + la[k][n];
            else
                out[c] = base + lsxi[j] + la[k - 1][n - j];
        }
    };
    const std::vector<double> li = model_log_integrals(model, dim, log_f);

    KnN0Joint joint;
    joint.n = n;
    joint.p.assign(static_cast<size_t>(n) * (n + 1), 0.0);
    const double lnfact = log_factorial(n);
    for (int c = 0; c < dim; ++c) {
        const int k = comps[c].first, j = comps[c].second;
        double lp = lnfact + log_split_prefactor(model, n, k, j > 0) + li[c];
        if (j == 0)
            lp -= log_factorial(k);
        else
            lp -= log_factorial(j) + log_factorial(k - 1);
        joint.p[static_cast<size_t>(k - 1) * (n + 1) + j] = std::exp(lp);
    }
    return joint;
}

ProbTable KnN0Joint::marginal_n0() const {
    ProbTable t;
    t.support_offset = 0;
    t.probs.assign(n + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            t.probs[j] += at(k, j);
    return t;
}

ProbTable KnN0Joint::marginal_kn() const {
    ProbTable t;
    t.support_offset = 1;
    t.probs.assign(n, 0.0);
    for (int k = 1; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            t.probs[k - 1] += at(k, j);
    return t;
}

ProbTable n0_distribution(const HnrmiModel& model, int n) {
    return kn_n0_joint(model, n).marginal_n0();
}

double variance_gap_constant(const HnrmiModel& model) {
    require_model(model);
    auto log_f = [&](double u, double* out) {
        out[0] = std::log(model.c) + std::log(u) - model.c * model.psi(u) +
                 model.log_tau(2, u);
    };
    return std::exp(model_log_integrals(model, 1, log_f)[0]);
}

}  // namespace hnrmi
