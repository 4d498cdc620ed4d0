#pragma once

// Combinatorial and special-function kernels shared by the spike-and-slab
// NRMI machinery: generalized factorial coefficients, upper incomplete gamma
// at integer (possibly non-positive) order, composition / set-partition
// enumeration, and log-space helpers.

#include <cstdint>
#include <functional>
#include <vector>

namespace hnrmi {

// log Gamma(x) for x > 0.
double log_gamma(double x);

// log of the rising factorial (a)_n = Gamma(a+n)/Gamma(a); a > 0, n >= 0.
// (a)_0 = 1 by convention.
double log_rising(double a, int n);

// log n! via log-gamma; n >= 0.
double log_factorial(int n);

// log C(n, k); 0 <= k <= n.
double log_binomial(int n, int k);

// log(exp(a) + exp(b)) guarded against overflow; -inf inputs allowed.
double log_add(double a, double b);

// Standard normal CDF.
double std_normal_cdf(double x);

// Inverse standard normal CDF, p in (0,1); accurate to ~1e-15.
double normal_quantile(double p);

// Generalized factorial coefficient C(n,i;sigma), evaluated by the direct
// alternating sum (1/i!) sum_{r=0}^{i} (-1)^r C(i,r) (-r sigma)_n.
// Accurate for n <= ~25; larger n should use GenFactTable.
// C(0,0;sigma) = 1, C(n,0;sigma) = 0 for n >= 1.
double gen_fact_coeff(int n, int i, double sigma);

// Table of C(n,i;sigma) held in log space (every non-structural entry is
// positive), filled by the triangular recurrence
//   C(n,i) = (n-1-i*sigma) C(n-1,i) + sigma C(n-1,i-1),
// whose coefficients are positive for all 1 <= i <= n, so the fill never
// cancels. Rows can be appended after construction.
class GenFactTable {
public:
    GenFactTable(int n_max, double sigma);

    double sigma() const { return sigma_; }
    int n_max() const { return static_cast<int>(log_rows_.size()) - 1; }

    // log C(n,i;sigma); -inf for structural zeros (i=0 with n>=1, or i>n).
    double log_at(int n, int i) const;
    // Linear value; may overflow to +inf for very large n.
    double at(int n, int i) const;

    // Extend the table so rows up to n_max exist.
    void grow(int n_max);

private:
    double sigma_;
    std::vector<std::vector<double>> log_rows_;  // log_rows_[n][i], i = 0..n
};

// Upper incomplete gamma Gamma(a, z) = int_z^inf x^{a-1} e^{-x} dx for
// integer a of any sign, z > 0. Anchored at Gamma(0,z) = E1(z); upward
// recurrence Gamma(a+1,z) = a Gamma(a,z) + z^a e^{-z} for a >= 0 and the
// downward rearrangement for a < 0.
double upper_inc_gamma_int(int a, double z);

// Exponential integral E1(z), z > 0: series for z <= 1, continued fraction
// (modified Lentz) for z > 1.
double exp_int_e1(double z);

// Visits every ordered vector (n_1,...,n_k) of positive integers summing to
// n, exactly once; there are C(n-1,k-1) of them.
void enumerate_compositions(int n, int k,
                            const std::function<void(const std::vector<int>&)>& visit);

// Visits every set partition of {0,...,n-1}; blocks are index lists. Count
// equals the n-th Bell number. n <= 10.
void enumerate_set_partitions(int n,
                              const std::function<void(const std::vector<std::vector<int>>&)>& visit);

}  // namespace hnrmi
