#include "hnrmi/nig.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "hnrmi/quadrature.hpp"
#include "hnrmi/special.hpp"

namespace hnrmi {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.6931471805599453094;
constexpr double kHalfLogPi = 0.5723649429247000870;  // log(sqrt(pi))

// log of Gamma(m - 1/2) / (2 sqrt(pi)): the constant in tau_m.
double log_tau_const(int m) {
    return log_gamma(m - 0.5) - kLog2 - kHalfLogPi;
}

double log_pow1mz(double zeta, int e) {
    return e == 0 ? 0.0 : e * std::log1p(-zeta);
}
}  // namespace

void NigParams::check() const {
    if (!(beta > 0.0)) throw std::invalid_argument("NigParams: beta must be positive");
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw std::invalid_argument("NigParams: zeta must lie in [0,1]");
}

RhoCache::RhoCache(double beta, double zeta) : beta_(beta), zeta_(zeta) {
    NigParams{beta, zeta}.check();
}

double RhoCache::upper_gamma(int a) {
    auto it = gam_.find(a);
    if (it != gam_.end()) return it->second;
    const double v = upper_inc_gamma_int(a, beta_);
    gam_.emplace(a, v);
    return v;
}

// Positive-integrand form, from u = w^2 + 2 beta w in the mixing integral:
// rho_{0,q}^{(n)} = int_0^inf (w(w+2beta))^{n-1} (beta+w)^{q-2n+1} e^{-(beta+w)} dw.
double RhoCache::rho0_by_quadrature(int n, int q) const {
    const double b = beta_;
    auto log_f = [n, q, b](double w) {
        return (n - 1) * (std::log(w) + std::log(w + 2.0 * b)) +
               (q - 2 * n + 1) * std::log(b + w) - (b + w);
    };
    return integrate_semi_infinite_log(log_f, 1e-12);
}

double RhoCache::log_rho0(int n, int q) {
    if (n < 1 || q < 1) throw std::domain_error("RhoCache: n, q must be >= 1");
    if (n >= 4096 || q >= 4096) throw std::domain_error("RhoCache: index too large");
    const int64_t key = (static_cast<int64_t>(n) << 12) | q;
    auto it = rho0_.find(key);
    if (it != rho0_.end()) return it->second;

    // Alternating sum; track the positive/negative parts so catastrophic
    // cancellation (or overflow) can be detected and routed to quadrature.
    double pos = 0.0, neg = 0.0;
    const double l2b = 2.0 * std::log(beta_);
    for (int r = 0; r <= n - 1; ++r) {
        const double t =
            std::exp(log_binomial(n - 1, r) + r * l2b) * upper_gamma(q - 2 * r);
        if (r & 1)
            neg += t;
        else
            pos += t;
    }
    double lv;
    const double res = pos - neg;
    if (!std::isfinite(pos + neg) || res <= 0.0 || (pos + neg) > 1e4 * res)
        lv = rho0_by_quadrature(n, q);
    else
        lv = std::log(res);
    rho0_.emplace(key, lv);
    return lv;
}

double RhoCache::log_rho(int m, int q, int n) {
    if (m < 1 || q < 1 || n < 1)
        throw std::domain_error("RhoCache: m, q, n must be >= 1");
    if (m >= 4096 || q >= 4096 || n >= 4096)
        throw std::domain_error("RhoCache: index too large");
    if (zeta_ == 0.0) return kNegInf;
    const int64_t key =
        (static_cast<int64_t>(m) << 24) | (static_cast<int64_t>(q) << 12) | n;
    auto it = rho_.find(key);
    if (it != rho_.end()) return it->second;

    const double l2z = std::log(2.0 * zeta_);
    double acc = kNegInf;
    for (int i = 1; i <= m; ++i) {
        const double lcoef =
            log_gamma(2 * m - i) - log_gamma(m + 1 - i) - log_gamma(i);
        acc = log_add(acc, i * l2z + lcoef + log_rho0(n, q + i - 1));
    }
    rho_.emplace(key, acc);
    return acc;
}

namespace {

double log_split_core(const NigParams& p, const std::vector<int>& freqs,
                      int spike_index, RhoCache& rho) {
    ClusterState st{freqs, spike_index};
    st.check();
    const int n = st.n();
    const int k = st.k();
    double acc = kLog2 + p.beta - log_gamma(n);
    if (spike_index < 0) {
        acc += log_pow1mz(p.zeta, k);
        for (int m = 0; m < k; ++m) acc += log_tau_const(freqs[m]);
        acc += rho.log_rho0(n, k);
    } else {
        acc += log_pow1mz(p.zeta, k - 1) - 2.0 * freqs[spike_index] * kLog2;
        for (int m = 0; m < k; ++m)
            if (m != spike_index) acc += log_tau_const(freqs[m]);
        acc += rho.log_rho(freqs[spike_index], k, n);
    }
    return acc;
}

}  // namespace

double nig_log_eppf_split(const NigParams& p, const std::vector<int>& freqs,
                          int spike_index, RhoCache& rho) {
    p.check();
    return log_split_core(p, freqs, spike_index, rho);
}

double nig_eppf_split(const NigParams& p, const std::vector<int>& freqs,
                      int spike_index) {
    p.check();
    RhoCache rho(p.beta, p.zeta);
    return std::exp(log_split_core(p, freqs, spike_index, rho));
}

double nig_log_eppf(const NigParams& p, const std::vector<int>& freqs,
                    RhoCache& rho) {
    p.check();
    double acc = log_split_core(p, freqs, -1, rho);
    for (int j = 0; j < static_cast<int>(freqs.size()); ++j)
        acc = log_add(acc, log_split_core(p, freqs, j, rho));
    return acc;
}

double nig_eppf(const NigParams& p, const std::vector<int>& freqs) {
    RhoCache rho(p.beta, p.zeta);
    return std::exp(nig_log_eppf(p, freqs, rho));
}

PredictiveWeights nig_predictive(const NigParams& p, const ClusterState& state,
                                 RhoCache& rho) {
    p.check();
    state.check();
    const int n = state.n();
    const int k = state.k();
    PredictiveWeights w;
    w.w_existing.assign(k, 0.0);
    if (!state.has_spike()) {
        const double lden = rho.log_rho0(n, k);
        const double r_same = std::exp(rho.log_rho0(n + 1, k) - lden);
        for (int m = 0; m < k; ++m)
            w.w_existing[m] = r_same * (state.freqs[m] - 0.5) / n;
        w.w_new = std::exp(rho.log_rho0(n + 1, k + 1) - lden) / (2.0 * n);
        return w;
    }
    const int nj = state.freqs[state.spike_index];
    const double lden = rho.log_rho(nj, k, n);
    if (!std::isfinite(lden))
        throw std::runtime_error(
            "nig_predictive: conditioning state has zero probability");
    const double r_same = std::exp(rho.log_rho(nj, k, n + 1) - lden);
    for (int m = 0; m < k; ++m)
        if (m != state.spike_index)
            w.w_existing[m] = r_same * (state.freqs[m] - 0.5) / n;
    w.w_spike = std::exp(rho.log_rho(nj + 1, k, n + 1) - lden) / (4.0 * n);
    w.w_new = (1.0 - p.zeta) *
              std::exp(rho.log_rho(nj, k + 1, n + 1) - lden) / (2.0 * n);
    return w;
}

PredictiveWeights nig_predictive(const NigParams& p, const ClusterState& state) {
    RhoCache rho(p.beta, p.zeta);
    return nig_predictive(p, state, rho);
}

KnN0Joint nig_kn_n0_joint(const NigParams& p, int n) {
    p.check();
    if (n < 1) throw std::invalid_argument("nig_kn_n0_joint: n must be >= 1");
    RhoCache rho(p.beta, p.zeta);
    GenFactTable gft(n, 0.5);
    KnN0Joint joint;
    joint.n = n;
    joint.p.assign(static_cast<size_t>(n) * (n + 1), 0.0);
    const double lbase = kLog2 + p.beta - log_gamma(n);
    for (int k = 1; k <= n; ++k) {
        const double lp =
            lbase + log_pow1mz(p.zeta, k) + gft.log_at(n, k) + rho.log_rho0(n, k);
        joint.p[static_cast<size_t>(k - 1) * (n + 1)] = std::exp(lp);
    }
    if (p.zeta > 0.0) {
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n - j + 1; ++k) {
                const double lp = lbase + log_binomial(n, j) -
                                  2.0 * j * kLog2 + log_pow1mz(p.zeta, k - 1) +
                                  gft.log_at(n - j, k - 1) + rho.log_rho(j, k, n);
                joint.p[static_cast<size_t>(k - 1) * (n + 1) + j] = std::exp(lp);
            }
    }
    return joint;
}

ProbTable nig_n0_distribution(const NigParams& p, int n) {
    return nig_kn_n0_joint(p, n).marginal_n0();
}

double nig_variance_gap_constant(const NigParams& p) {
    p.check();
    return 0.5 - 0.5 * p.beta * p.beta * std::exp(p.beta) *
                     upper_inc_gamma_int(-1, p.beta);
}

HnrmiModel make_nig_model(double beta, double zeta, int n_max) {
    NigParams{beta, zeta}.check();
    const double tau = beta * beta;
    auto gft = std::make_shared<GenFactTable>(n_max, 0.5);
    HnrmiModel m;
    m.c = 1.0;
    m.zeta = zeta;
    m.label = "nig";
    m.psi = [tau, beta](double u) { return std::sqrt(tau + u) - beta; };
    m.log_tau = [tau](int q, double u) {
        return (0.5 - q) * std::log(tau + u) + log_tau_const(q);
    };
    m.log_xi = [tau, gft](int n, int i, double u) {
        return (0.5 * i - n) * std::log(tau + u) + gft->log_at(n, i);
    };
    // u = v^2 + 2 beta v makes psi(u(v)) = v exactly.
    m.u_of_v = [beta](double v) { return v * (v + 2.0 * beta); };
    m.log_dudv = [beta](double v) { return std::log(2.0 * (v + beta)); };
    return m;
}

}  // namespace hnrmi
