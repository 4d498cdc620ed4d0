#include "hnrmi/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "hnrmi/core.hpp"

namespace hnrmi {

namespace {

class StableUrnModel final : public PredictiveModel {
public:
    explicit StableUrnModel(const StableParams& p) : p_(p), phi_(p.sigma, p.zeta) {
        p_.check();
    }
    PredictiveWeights weights(const ClusterState& state) override {
        return stable_predictive(p_, state, phi_);
    }
    double zeta() const override { return p_.zeta; }
    std::unique_ptr<PredictiveModel> clone() const override {
        return std::make_unique<StableUrnModel>(p_);
    }

private:
    StableParams p_;
    PhiTable phi_;
};

class NigUrnModel final : public PredictiveModel {
public:
    explicit NigUrnModel(const NigParams& p) : p_(p), rho_(p.beta, p.zeta) {
        p_.check();
    }
    PredictiveWeights weights(const ClusterState& state) override {
        return nig_predictive(p_, state, rho_);
    }
    double zeta() const override { return p_.zeta; }
    std::unique_ptr<PredictiveModel> clone() const override {
        return std::make_unique<NigUrnModel>(p_);
    }

private:
    NigParams p_;
    RhoCache rho_;
};

class GenericUrnModel final : public PredictiveModel {
public:
    explicit GenericUrnModel(const HnrmiModel& m) : m_(m) {}
    PredictiveWeights weights(const ClusterState& state) override {
        return predictive(m_, state);
    }
    double zeta() const override { return m_.zeta; }
    std::unique_ptr<PredictiveModel> clone() const override {
        return std::make_unique<GenericUrnModel>(m_);
    }

private:
    HnrmiModel m_;
};

double standard_normal_slab(Rng& rng) { return rng.normal(); }

}  // namespace

std::unique_ptr<PredictiveModel> make_stable_urn(const StableParams& p) {
    return std::make_unique<StableUrnModel>(p);
}
std::unique_ptr<PredictiveModel> make_nig_urn(const NigParams& p) {
    return std::make_unique<NigUrnModel>(p);
}
std::unique_ptr<PredictiveModel> make_generic_urn(const HnrmiModel& m) {
    return std::make_unique<GenericUrnModel>(m);
}

void UrnState::check() const {
    clusters.check();
    if (atoms.size() != clusters.freqs.size())
        throw std::invalid_argument("UrnState: one atom per cluster required");
}

double urn_step(PredictiveModel& model, UrnState& state, Rng& rng,
                const std::function<double(Rng&)>& slab, double x0) {
    const auto& draw_slab = slab ? slab : standard_normal_slab;
    ClusterState& cs = state.clusters;

    auto open_spike = [&]() {
        cs.freqs.push_back(1);
        cs.spike_index = cs.k() - 1;
        state.atoms.push_back(x0);
        return x0;
    };
    auto open_diffuse = [&]() {
        const double atom = draw_slab(rng);
        cs.freqs.push_back(1);
        state.atoms.push_back(atom);
        return atom;
    };

    if (cs.k() == 0) {
        // First observation: straight draw from the base measure.
        return rng.next_double() < model.zeta() ? open_spike() : open_diffuse();
    }

    const PredictiveWeights w = model.weights(cs);
    double u = rng.next_double();
    for (int m = 0; m < cs.k(); ++m) {
        if (u < w.w_existing[m]) {
            cs.freqs[m] += 1;
            return state.atoms[m];
        }
        u -= w.w_existing[m];
    }
    if (cs.has_spike() && u < w.w_spike) {
        cs.freqs[cs.spike_index] += 1;
        return x0;
    }
    if (cs.has_spike()) {
        // Remaining mass: new diffuse cluster from the slab.
        return open_diffuse();
    }
    // Remaining mass draws afresh from the base measure: spike atom with
    // probability zeta, slab otherwise.
    return rng.next_double() < model.zeta() ? open_spike() : open_diffuse();
}

SampleResult sample_trajectory(PredictiveModel& model, const UrnState& start,
                               int m, Rng& rng,
                               const std::function<double(Rng&)>& slab, double x0) {
    if (m < 0) throw std::invalid_argument("sample_trajectory: m must be >= 0");
    start.check();
    SampleResult out;
    out.state = start;
    out.values.reserve(m);
    for (int i = 0; i < m; ++i) {
        const int sp0 = out.state.clusters.spike_index;
        const int cnt0 = sp0 >= 0 ? out.state.clusters.freqs[sp0] : 0;
        const double v = urn_step(model, out.state, rng, slab, x0);
        out.values.push_back(v);
        const int sp1 = out.state.clusters.spike_index;
        const int cnt1 = sp1 >= 0 ? out.state.clusters.freqs[sp1] : 0;
        if (cnt1 == cnt0 + 1) ++out.n_spike;
    }
    return out;
}

SampleResult outer_sample_trajectory(PredictiveModel& diffuse_model, double zeta,
                                     const UrnState& start, int m, Rng& rng,
                                     const std::function<double(Rng&)>& slab,
                                     double x0) {
    if (m < 0) throw std::invalid_argument("outer_sample_trajectory: m must be >= 0");
    if (zeta < 0.0 || zeta >= 1.0)
        throw std::invalid_argument("outer_sample_trajectory: zeta must lie in [0,1)");
    if (diffuse_model.zeta() != 0.0)
        throw std::invalid_argument(
            "outer_sample_trajectory: diffuse_model must have zero spike weight");
    start.check();
    SampleResult out;
    out.state = start;
    out.values.reserve(m);
    for (int i = 0; i < m; ++i) {
        if (rng.next_double() < zeta) {
            out.values.push_back(x0);
            ++out.n_spike;
        } else {
            out.values.push_back(urn_step(diffuse_model, out.state, rng, slab, x0));
        }
    }
    return out;
}

UrnState make_conditioning_state(const std::vector<int>& freqs,
                                 const std::vector<double>& atoms,
                                 int spike_index, double x0) {
    UrnState st;
    st.clusters.freqs = freqs;
    st.clusters.spike_index = spike_index;
    st.atoms = atoms;
    if (spike_index >= 0 && spike_index < static_cast<int>(atoms.size()))
        st.atoms[spike_index] = x0;
    st.check();
    return st;
}

}  // namespace hnrmi
