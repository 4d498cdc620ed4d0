#pragma once

// Adaptive quadrature over (0, inf) used for every mixing-measure integral:
// the substitution u = t/(1-t) maps to (0,1), which is then covered by
// adaptively bisected panels, each estimated with nested Gauss-Legendre
// rules (15-point value, 7-point embedded error estimate).

#include <functional>
#include <vector>

namespace hnrmi {

// Integrates f over (0, inf). f must be continuous, absolutely integrable,
// bounded at 0 after its leading power, and decaying at infinity. Throws
// std::runtime_error if the error estimate stalls above tol.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               double tol = 1e-10);

// Log-space variant: given log_f(u), returns log of int_0^inf exp(log_f(u)) du.
// The integrand is internally rescaled by its probed maximum so that values
// spanning hundreds of orders of magnitude (EPPF integrands at n ~ 100)
// neither overflow nor underflow. log_f may return -inf.
double integrate_semi_infinite_log(const std::function<double(double)>& log_f,
                                   double tol = 1e-10);

// Family variant: integrates dim integrands sharing the same panels.
// log_f(u, out) must fill out[0..dim) with the log-integrands. Returns the
// per-component log-integrals. Components that are identically -inf come
// back as -inf. Refinement continues until every component with
// non-negligible mass meets the relative tolerance.
std::vector<double> integrate_semi_infinite_log_family(
    int dim, const std::function<void(double, double*)>& log_f,
    double tol = 1e-10);

}  // namespace hnrmi
