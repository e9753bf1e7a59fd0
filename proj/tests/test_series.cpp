#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dualcluster/series.hpp"

using namespace dualcluster::series;

namespace {

// Bracketing oracle for alternating sums: the limit lies between consecutive
// partial sums, so the midpoint misses it by at most half the next term.
double eta_bracket(double s, long terms, double* half_width) {
  double partial = 0.0;
  for (long n = 1; n <= terms; ++n) {
    const double t = std::pow(static_cast<double>(n), -s);
    partial += (n % 2 == 1) ? t : -t;
  }
  const double next = std::pow(static_cast<double>(terms + 1), -s);
  *half_width = 0.5 * next;
  return partial + ((terms + 1) % 2 == 1 ? 0.5 * next : -0.5 * next);
}

}  // namespace

TEST_CASE("eta(1) is ln 2") {
  CHECK(eta(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("eta(3/2) against the bracketing oracle") {
  double hw = 0.0;
  const double ref = eta_bracket(1.5, 2'000'000, &hw);
  CHECK(std::abs(eta(1.5) - ref) <= hw + 1e-12);
}

TEST_CASE("direct summation agreement away from the boundary") {
  const double s = 2.0, x = 0.5;
  double direct = 0.0;
  for (int n = 3; n < 200; ++n)
    direct += ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(x, n) * std::pow(n, -s);
  CHECK(alternating_power_sum(s, x, 3) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("geometric closed form at s = 0") {
  const double x = 0.3;
  CHECK(alternating_power_sum(0.0, x, 3) ==
        doctest::Approx(-x * x * x / (1.0 + x)).epsilon(1e-15));
  // Abel limit at the boundary
  CHECK(alternating_power_sum(0.0, 1.0, 3) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("boundary values via acceleration") {
  // sum_{n>=3} (-1)^n / n = 1/2 - ln 2
  CHECK(alternating_power_sum(1.0, 1.0, 3) ==
        doctest::Approx(0.5 - std::log(2.0)).epsilon(1e-13));
  // sum_{n>=3} (-1)^n n^{-3/2} = 1 - 2^{-3/2} - eta(3/2)
  double hw = 0.0;
  const double eta32 = eta_bracket(1.5, 2'000'000, &hw);
  CHECK(std::abs(alternating_power_sum(1.5, 1.0, 3) -
                 (1.0 - std::pow(2.0, -1.5) - eta32)) <= hw + 1e-12);
}

TEST_CASE("domain errors") {
  CHECK_THROWS(alternating_power_sum(-0.5, 1.0, 3));
  CHECK_THROWS(alternating_power_sum(1.0, 1.5, 3));
  CHECK_THROWS(eta(0.0));
  CHECK_THROWS(zeta(1.0));
}

TEST_CASE("zeta via the eta identity") {
  CHECK(zeta(2.0) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-12));
}

TEST_CASE("tabulated Euler transform") {
  std::vector<double> terms;
  for (int n = 3; n < 40; ++n)
    terms.push_back(((n % 2 == 0) ? 1.0 : -1.0) / n);
  CHECK(euler_sum_alternating(terms) ==
        doctest::Approx(0.5 - std::log(2.0)).epsilon(1e-9));
}
