#include "dualcluster/series.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace dualcluster::series {

namespace {

// Averages adjacent partial sums repeatedly; returns the apex of the
// triangle. For alternating series with totally monotone |terms| the error
// shrinks roughly like 2^-K.
double average_triangle(std::vector<double> partial) {
  const size_t k = partial.size();
  for (size_t pass = 1; pass < k; ++pass) {
    for (size_t i = 0; i + pass < k; ++i) {
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    }
  }
  return partial[0];
}

double accelerated_tail(double s, double x, int n0, int k_terms) {
  std::vector<double> partial(static_cast<size_t>(k_terms));
  double acc = 0.0;
  for (int i = 0; i < k_terms; ++i) {
    const int n = n0 + i;
    const double term = std::pow(static_cast<double>(n), -s) * std::pow(x, n);
    acc += (n % 2 == 0) ? term : -term;
    partial[static_cast<size_t>(i)] = acc;
  }
  return average_triangle(std::move(partial));
}

}  // namespace

double alternating_power_sum(double s, double x, int n0) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("alternating_power_sum: x outside [0,1]");
  if (n0 < 1) throw std::domain_error("alternating_power_sum: n0 must be >= 1");
  if (x == 0.0) return 0.0;

  if (s == 0.0) {
    // geometric closed form; at x = 1 this is the Abel limit
    const double lead = (n0 % 2 == 0) ? 1.0 : -1.0;
    return lead * std::pow(x, n0) / (1.0 + x);
  }
  if (x == 1.0 && s < 0.0) {
    throw std::domain_error("alternating_power_sum: divergent at x = 1 for s < 0");
  }

  if (x <= 0.75) {
    // direct summation; the alternating remainder is below the next term
    double acc = 0.0;
    for (int n = n0; n < n0 + 100000; ++n) {
      const double term = std::pow(static_cast<double>(n), -s) * std::pow(x, n);
      acc += (n % 2 == 0) ? term : -term;
      if (term < 1e-18 * (std::abs(acc) + 1e-300) || term < 5e-324) break;
    }
    return acc;
  }

  double prev = accelerated_tail(s, x, n0, 24);
  for (int k = 48; k <= 384; k *= 2) {
    const double cur = accelerated_tail(s, x, n0, k);
    if (std::abs(cur - prev) <= 1e-12 * (std::abs(cur) + 1e-30)) return cur;
    prev = cur;
  }
  return prev;
}

double euler_sum_alternating(const std::vector<double>& terms) {
  if (terms.empty()) return 0.0;
  std::vector<double> partial(terms.size());
  double acc = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) {
    acc += terms[i];
    partial[i] = acc;
  }
  return average_triangle(std::move(partial));
}

double eta(double s) {
  if (s <= 0.0) throw std::domain_error("eta: s must be positive");
  return -alternating_power_sum(s, 1.0, 1);
}

double zeta(double s) {
  if (s <= 1.0) throw std::domain_error("zeta: s must exceed 1");
  return eta(s) / (1.0 - std::pow(2.0, 1.0 - s));
}

}  // namespace dualcluster::series
