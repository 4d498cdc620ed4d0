#include "hnrmi/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hnrmi {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

double log_rising(double a, int n) {
    if (n < 0) throw std::domain_error("log_rising: n must be >= 0");
    if (n == 0) return 0.0;
    return log_gamma(a + n) - log_gamma(a);
}

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
    return std::lgamma(n + 1.0);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::domain_error("log_binomial: require 0 <= k <= n");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
    // Acklam's rational approximation, then one Halley refinement via erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = std_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double gen_fact_coeff(int n, int i, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("gen_fact_coeff: sigma must lie in (0,1)");
    if (n < 0 || i < 0 || i > n)
        throw std::domain_error("gen_fact_coeff: require 0 <= i <= n");
    if (n == 0) return 1.0;  // C(0,0) = 1
    if (i == 0) return 0.0;  // C(n,0) = 0 for n >= 1
    double sum = 0.0;
    for (int r = 1; r <= i; ++r) {  // r = 0 term is (0)_n = 0 for n >= 1
        double rising = 1.0;        // (-r sigma)_n = prod_{t=0}^{n-1} (t - r sigma)
        for (int t = 0; t < n; ++t) rising *= (t - r * sigma);
        double binom = std::exp(log_binomial(i, r));
        sum += ((r & 1) ? -1.0 : 1.0) * binom * rising;
    }
    return sum / std::exp(log_factorial(i));
}

GenFactTable::GenFactTable(int n_max, double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("GenFactTable: sigma must lie in (0,1)");
    if (n_max < 0) throw std::domain_error("GenFactTable: n_max must be >= 0");
    log_rows_.push_back({0.0});  // log C(0,0) = 0
    grow(n_max);
}

void GenFactTable::grow(int n_max) {
    const double log_sigma = std::log(sigma_);
    for (int n = static_cast<int>(log_rows_.size()); n <= n_max; ++n) {
        const std::vector<double>& prev = log_rows_.back();
        std::vector<double> row(n + 1, kNegInf);
        for (int i = 1; i <= n; ++i) {
            double keep = kNegInf;  // (n-1-i*sigma) C(n-1,i); coefficient > 0 when i <= n-1
            if (i <= n - 1) keep = std::log(n - 1 - i * sigma_) + prev[i];
            const double shift = log_sigma + prev[i - 1];
            row[i] = log_add(keep, shift);
        }
        log_rows_.push_back(std::move(row));
    }
}

double GenFactTable::log_at(int n, int i) const {
    if (n < 0 || n >= static_cast<int>(log_rows_.size()) || i < 0)
        throw std::domain_error("GenFactTable: index out of range");
    if (i > n) return kNegInf;
    return log_rows_[n][i];
}

double GenFactTable::at(int n, int i) const {
    return std::exp(log_at(n, i));
}

double exp_int_e1(double z) {
    if (!(z > 0.0)) throw std::domain_error("exp_int_e1: z must be positive");
    if (z <= 1.0) {
        // E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= z / k;
            const double add = term / k;
            sum += (k & 1) ? add : -add;
            if (add < 1e-18 * std::max(1.0, sum)) break;
        }
        return -kEulerGamma - std::log(z) + sum;
    }
    // Continued fraction E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
    // evaluated by the modified Lentz algorithm.
    const double tiny = 1e-300;
    double b = z + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int k = 1; k <= 200; ++k) {
        const double an = -static_cast<double>(k) * k;
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z) * h;
}

double upper_inc_gamma_int(int a, double z) {
    if (!(z > 0.0)) throw std::domain_error("upper_inc_gamma_int: z must be positive");
    if (a == 0) return exp_int_e1(z);
    if (a > 0) {
        // Upward from Gamma(1,z) = e^{-z}: all terms positive, stable.
        double g = std::exp(-z);
        for (int t = 1; t < a; ++t) g = t * g + std::exp(t * std::log(z) - z);
        return g;
    }
    // Downward from Gamma(0,z): Gamma(a-1,z) = (Gamma(a,z) - z^{a-1} e^{-z})/(a-1).
    double g = exp_int_e1(z);
    for (int t = 0; t > a; --t)
        g = (g - std::exp((t - 1) * std::log(z) - z)) / (t - 1);
    return g;
}

void enumerate_compositions(int n, int k,
                            const std::function<void(const std::vector<int>&)>& visit) {
    if (k < 1 || k > n) throw std::domain_error("enumerate_compositions: require 1 <= k <= n");
    std::vector<int> parts(k, 1);
    parts[k - 1] = n - (k - 1);
    // Lexicographic walk: push surplus leftward one unit at a time.
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == k - 1) {
            parts[pos] = remaining;
            visit(parts);
            return;
        }
        for (int v = 1; v <= remaining - (k - 1 - pos); ++v) {
            parts[pos] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, n);
}

void enumerate_set_partitions(int n,
                              const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
    if (n < 1 || n > 10) throw std::domain_error("enumerate_set_partitions: require 1 <= n <= 10");
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int item) {
        if (item == n) {
            visit(blocks);
            return;
        }
        for (size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(item);
            rec(item + 1);
            blocks[b].pop_back();
        }
        blocks.push_back({item});
        rec(item + 1);
        blocks.pop_back();
    };
    rec(0);
}

}  // namespace hnrmi
