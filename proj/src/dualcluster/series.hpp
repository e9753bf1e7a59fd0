#pragma once

#include <vector>

namespace dualcluster::series {

// Sum_{n=n0}^inf (-1)^n n^{-s} x^n for 0 <= x <= 1.
//
// Power-law alternating tails like this one show up throughout the cluster
// series. Direct summation is used when the geometric factor decays fast;
// near x = 1 the tail is only conditionally convergent (0 < s <= 1), so the
// partial sums are accelerated by iterated averaging (Euler transform) with
// a stopping rule on the increments. s = 0 has a geometric closed form,
// which also supplies the Abel limit at x = 1.
//
// Throws std::domain_error for x == 1 with s < 0 (divergent, not summable
// by this routine) and for x outside [0, 1].
double alternating_power_sum(double s, double x, int n0);

// Euler transform of an explicitly tabulated alternating series. `terms`
// are the signed terms in order; the sign pattern must alternate.
double euler_sum_alternating(const std::vector<double>& terms);

// Dirichlet eta(s) = sum (-1)^{n-1} n^{-s}, s > 0.
double eta(double s);

// Riemann zeta via the eta identity, s > 1.
double zeta(double s);

}  // namespace dualcluster::series
