#include "hnrmi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hnrmi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct GaussRule {
    std::vector<double> node;    // abscissas on [-1,1]
    std::vector<double> weight;
};

// Nodes/weights of the order-n Gauss-Legendre rule by Newton iteration on
// the Legendre recurrence; avoids transcribing long literal tables.
GaussRule make_gauss_rule(int n) {
    GaussRule r;
    r.node.resize(n);
    r.weight.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weight[i] = w;
        r.weight[n - 1 - i] = w;
    }
    return r;
}

const GaussRule& rule7() {
    static const GaussRule r = make_gauss_rule(7);
    return r;
}
const GaussRule& rule15() {
    static const GaussRule r = make_gauss_rule(15);
    return r;
}

double map_u(double t) { return t / (1.0 - t); }

// Probe points on (0,1): a uniform grid plus geometric tails toward both
// endpoints (integrands peaked at large u live at t near 1).
std::vector<double> probe_points() {
    std::vector<double> ts;
    for (int i = 0; i < 160; ++i) ts.push_back((i + 0.5) / 160.0);
    double d = 0.5;
    for (int j = 0; j < 45; ++j) {
        d *= 0.5;
        ts.push_back(d);
        ts.push_back(1.0 - d);
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

}  // namespace

double integrate_semi_infinite(const std::function<double(double)>& f, double tol) {
    struct Panel {
        double a, b, val, err;
    };
    auto eval_panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double v15 = 0.0, v7 = 0.0;
        const GaussRule& g15 = rule15();
        for (int i = 0; i < 15; ++i) {
            const double t = mid + half * g15.node[i];
            const double omt = 1.0 - t;
            v15 += g15.weight[i] * f(map_u(t)) / (omt * omt);
        }
        const GaussRule& g7 = rule7();
        for (int i = 0; i < 7; ++i) {
            const double t = mid + half * g7.node[i];
            const double omt = 1.0 - t;
            v7 += g7.weight[i] * f(map_u(t)) / (omt * omt);
        }
        return Panel{a, b, v15 * half, std::fabs(v15 - v7) * half};
    };

    std::vector<Panel> panels;
    const int init = 16;
    for (int i = 0; i < init; ++i)
        panels.push_back(eval_panel(i / double(init), (i + 1) / double(init)));

    const int max_panels = 20000;
    while (true) {
        double total = 0.0, err = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].val;
            err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (err <= tol * std::max(std::fabs(total), 1e-300) || err < 1e-305) return total;
        if (static_cast<int>(panels.size()) >= max_panels ||
            panels[worst].b - panels[worst].a < 1e-14)
            throw std::runtime_error("integrate_semi_infinite: failed to reach tolerance");
        const Panel p = panels[worst];
        panels[worst] = eval_panel(p.a, 0.5 * (p.a + p.b));
        panels.push_back(eval_panel(0.5 * (p.a + p.b), p.b));
    }
}

std::vector<double> integrate_semi_infinite_log_family(
    int dim, const std::function<void(double, double*)>& log_f, double tol) {
    if (dim < 1) throw std::domain_error("integrate_semi_infinite_log_family: dim >= 1");

    // Per-component offsets from a probe sweep so exp() stays in range.
    std::vector<double> offset(dim, kNegInf);
    std::vector<double> buf(dim);
    for (double t : probe_points()) {
        const double u = map_u(t);
        if (!(u > 0.0) || !std::isfinite(u)) continue;
        log_f(u, buf.data());
        const double lj = -2.0 * std::log1p(-t);  // log Jacobian dt -> du
        for (int c = 0; c < dim; ++c)
            offset[c] = std::max(offset[c], buf[c] + lj);
    }

    struct Panel {
        double a, b;
        std::vector<double> val;   // 15-point estimates per component
        std::vector<double> err;
    };
    auto eval_panel = [&](double a, double b) {
        Panel p;
        p.a = a;
        p.b = b;
        p.val.assign(dim, 0.0);
        p.err.assign(dim, 0.0);
        std::vector<double> v7(dim, 0.0);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        const GaussRule& g15 = rule15();
        for (int i = 0; i < 15; ++i) {
            const double t = mid + half * g15.node[i];
            const double u = map_u(t);
            const double lj = -2.0 * std::log1p(-t);
            if (!(u > 0.0) || !std::isfinite(u)) continue;
            log_f(u, buf.data());
            for (int c = 0; c < dim; ++c) {
                const double lg = buf[c] + lj - offset[c];
                if (lg > kNegInf) p.val[c] += g15.weight[i] * std::exp(lg);
            }
        }
        const GaussRule& g7 = rule7();
        for (int i = 0; i < 7; ++i) {
            const double t = mid + half * g7.node[i];
            const double u = map_u(t);
            const double lj = -2.0 * std::log1p(-t);
            if (!(u > 0.0) || !std::isfinite(u)) continue;
            log_f(u, buf.data());
            for (int c = 0; c < dim; ++c) {
                const double lg = buf[c] + lj - offset[c];
                if (lg > kNegInf) v7[c] += g7.weight[i] * std::exp(lg);
            }
        }
        for (int c = 0; c < dim; ++c) {
            p.err[c] = std::fabs(p.val[c] - v7[c]) * half;
            p.val[c] *= half;
        }
        return p;
    };

    std::vector<Panel> panels;
    const int init = 16;
    for (int i = 0; i < init; ++i)
        panels.push_back(eval_panel(i / double(init), (i + 1) / double(init)));

    const int max_panels = 8000;
    std::vector<double> tot(dim), errtot(dim);
    while (true) {
        std::fill(tot.begin(), tot.end(), 0.0);
        std::fill(errtot.begin(), errtot.end(), 0.0);
        for (const Panel& p : panels)
            for (int c = 0; c < dim; ++c) {
                tot[c] += p.val[c];
                errtot[c] += p.err[c];
            }
        // Worst component by relative error (components with zero mass pass).
        int cw = -1;
        double rw = 0.0;
        for (int c = 0; c < dim; ++c) {
            if (tot[c] <= 0.0) continue;
            const double rel = errtot[c] / tot[c];
            if (rel > rw) {
                rw = rel;
                cw = c;
            }
        }
        if (cw < 0 || rw <= tol) break;
        size_t worst = 0;
        for (size_t i = 0; i < panels.size(); ++i)
            if (panels[i].err[cw] > panels[worst].err[cw]) worst = i;
        if (static_cast<int>(panels.size()) >= max_panels ||
            panels[worst].b - panels[worst].a < 1e-14)
            throw std::runtime_error(
                "integrate_semi_infinite_log_family: failed to reach tolerance");
        const double a = panels[worst].a, b = panels[worst].b;
        panels[worst] = eval_panel(a, 0.5 * (a + b));
        panels.push_back(eval_panel(0.5 * (a + b), b));
    }

    std::vector<double> out(dim);
    for (int c = 0; c < dim; ++c)
        out[c] = tot[c] > 0.0 ? offset[c] + std::log(tot[c]) : kNegInf;
    return out;
}

double integrate_semi_infinite_log(const std::function<double(double)>& log_f,
                                   double tol) {
    auto fam = [&](double u, double* out) { out[0] = log_f(u); };
    return integrate_semi_infinite_log_family(1, fam, tol)[0];
}

}  // namespace hnrmi
