#include "hnrmi/stable.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace hnrmi {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void StableParams::check() const {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("StableParams: sigma must lie in (0,1)");
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw std::invalid_argument("StableParams: zeta must lie in [0,1]");
}

PhiTable::PhiTable(double sigma, double zeta, int m_cap, int q_cap)
    : sigma_(sigma), zeta_(zeta), gft_(1, sigma) {
    StableParams{sigma, zeta}.check();
    fill(std::max(1, m_cap), std::max(1, q_cap));
}

double PhiTable::direct_log_phi(int m, int q) {
    if (zeta_ == 0.0) return kNegInf;
    gft_.grow(m);
    const double lz = std::log(zeta_);
    double acc = kNegInf;
    for (int i = 1; i <= m; ++i)
        acc = log_add(acc, i * lz + log_gamma(q + i - 1) + gft_.log_at(m, i));
    return acc;
}

void PhiTable::fill(int m_cap, int q_cap) {
    m_cap_ = m_cap;
    q_cap_ = q_cap;
    lphi_.assign(m_cap + 2, std::vector<double>(q_cap + 2, kNegInf));
    for (int q = 1; q <= q_cap + 1; ++q)
        lphi_[m_cap + 1][q] = direct_log_phi(m_cap + 1, q);
    for (int m = 1; m <= m_cap; ++m)
        lphi_[m][q_cap + 1] = direct_log_phi(m, q_cap + 1);
    const double lcoef = std::log((1.0 - zeta_) * sigma_);  // -inf at zeta = 1
    for (int m = m_cap; m >= 1; --m)
        for (int q = q_cap; q >= 1; --q)
            lphi_[m][q] = log_add(lphi_[m + 1][q], lcoef + lphi_[m][q + 1]) -
                          std::log(m + (q - 1) * sigma_);
}

double PhiTable::log_phi(int m, int q) {
    if (m < 1 || q < 1) throw std::domain_error("PhiTable: m, q must be >= 1");
    if (m > m_cap_ || q > q_cap_)
        fill(std::max(2 * m_cap_, m), std::max(2 * q_cap_, q));
    return lphi_[m][q];
}

namespace {

// log of (1-zeta)^e, with the 0^0 = 1 convention at zeta = 1.
double log_pow1mz(double zeta, int e) {
    return e == 0 ? 0.0 : e * std::log1p(-zeta);
}

double log_split_core(const StableParams& p, const std::vector<int>& freqs,
                      int spike_index, PhiTable& phi) {
    ClusterState st{freqs, spike_index};
    st.check();
    const int n = st.n();
    const int k = st.k();
    double acc = -log_gamma(n);
    if (spike_index < 0) {
        acc += log_pow1mz(p.zeta, k) + (k - 1) * std::log(p.sigma) + log_gamma(k);
        for (int m = 0; m < k; ++m) acc += log_rising(1.0 - p.sigma, freqs[m] - 1);
    } else {
        acc += log_pow1mz(p.zeta, k - 1) + (k - 2) * std::log(p.sigma);
        for (int m = 0; m < k; ++m)
            if (m != spike_index) acc += log_rising(1.0 - p.sigma, freqs[m] - 1);
        acc += phi.log_phi(freqs[spike_index], k);
    }
    return acc;
}

}  // namespace

double stable_log_eppf_split(const StableParams& p, const std::vector<int>& freqs,
                             int spike_index, PhiTable& phi) {
    p.check();
    return log_split_core(p, freqs, spike_index, phi);
}

double stable_eppf_split(const StableParams& p, const std::vector<int>& freqs,
                         int spike_index) {
    p.check();
    PhiTable phi(p.sigma, p.zeta);
    return std::exp(log_split_core(p, freqs, spike_index, phi));
}

double stable_log_eppf(const StableParams& p, const std::vector<int>& freqs,
                       PhiTable& phi) {
    p.check();
    double acc = log_split_core(p, freqs, -1, phi);
    for (int j = 0; j < static_cast<int>(freqs.size()); ++j)
        acc = log_add(acc, log_split_core(p, freqs, j, phi));
    return acc;
}

double stable_eppf(const StableParams& p, const std::vector<int>& freqs) {
    PhiTable phi(p.sigma, p.zeta);
    return std::exp(stable_log_eppf(p, freqs, phi));
}

PredictiveWeights stable_predictive(const StableParams& p, const ClusterState& state,
                                    PhiTable& phi) {
    p.check();
    state.check();
    const int n = state.n();
    const int k = state.k();
    PredictiveWeights w;
    w.w_existing.assign(k, 0.0);
    for (int m = 0; m < k; ++m)
        if (m != state.spike_index)
            w.w_existing[m] = (state.freqs[m] - p.sigma) / n;
    if (!state.has_spike()) {
        w.w_new = k * p.sigma / n;
        return w;
    }
    const int nj = state.freqs[state.spike_index];
    const double ldenom = phi.log_phi(nj, k);
    if (!std::isfinite(ldenom))
        throw std::runtime_error(
            "stable_predictive: conditioning state has zero probability");
    w.w_spike = std::exp(phi.log_phi(nj + 1, k) - ldenom) / n;
    w.w_new =
        (1.0 - p.zeta) * p.sigma * std::exp(phi.log_phi(nj, k + 1) - ldenom) / n;
    return w;
}

PredictiveWeights stable_predictive(const StableParams& p, const ClusterState& state) {
    PhiTable phi(p.sigma, p.zeta);
    return stable_predictive(p, state, phi);
}

KnN0Joint stable_kn_n0_joint(const StableParams& p, int n) {
    p.check();
    if (n < 1) throw std::invalid_argument("stable_kn_n0_joint: n must be >= 1");
    GenFactTable gft(n, p.sigma);
    PhiTable phi(p.sigma, p.zeta, std::min(n, 16), std::min(n + 1, 17));
    KnN0Joint joint;
    joint.n = n;
    joint.p.assign(static_cast<size_t>(n) * (n + 1), 0.0);
    const double lbase = -std::log(p.sigma) - log_gamma(n);
    for (int k = 1; k <= n; ++k) {
        const double lp =
            lbase + log_pow1mz(p.zeta, k) + log_gamma(k) + gft.log_at(n, k);
        joint.p[static_cast<size_t>(k - 1) * (n + 1)] = std::exp(lp);
    }
    if (p.zeta > 0.0) {
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n - j + 1; ++k) {
                const double lp = lbase + log_binomial(n, j) +
                                  log_pow1mz(p.zeta, k - 1) +
                                  gft.log_at(n - j, k - 1) + phi.log_phi(j, k);
                joint.p[static_cast<size_t>(k - 1) * (n + 1) + j] = std::exp(lp);
            }
    }
    return joint;
}

ProbTable stable_n0_distribution(const StableParams& p, int n) {
    return stable_kn_n0_joint(p, n).marginal_n0();
}

double stable_variance_gap_constant(const StableParams& p) {
    p.check();
    return 1.0 - p.sigma;
}

HnrmiModel make_stable_model(double sigma, double zeta, int n_max) {
    StableParams{sigma, zeta}.check();
    auto gft = std::make_shared<GenFactTable>(n_max, sigma);
    HnrmiModel m;
    m.c = 1.0;
    m.zeta = zeta;
    m.label = "stable";
    m.psi = [sigma](double u) { return std::pow(u, sigma); };
    m.log_tau = [sigma](int q, double u) {
        return std::log(sigma) + log_rising(1.0 - sigma, q - 1) +
               (sigma - q) * std::log(u);
    };
    m.log_xi = [sigma, gft](int n, int i, double u) {
        return (sigma * i - n) * std::log(u) + gft->log_at(n, i);
    };
    // u = v^{1/sigma} turns u^{k sigma - 1} e^{-u^sigma} integrands into
    // smooth v^{k-1} e^{-v} ones.
    m.u_of_v = [sigma](double v) { return std::pow(v, 1.0 / sigma); };
    m.log_dudv = [sigma](double v) {
        return -std::log(sigma) + (1.0 / sigma - 1.0) * std::log(v);
    };
    return m;
}

}  // namespace hnrmi
