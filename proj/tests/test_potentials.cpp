#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "dualcluster/errors.hpp"
#include "dualcluster/potentials.hpp"

using namespace dualcluster;
using namespace dualcluster::potentials;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const GaussianPotential> gauss(double lambda = 1.0) {
  return std::make_shared<GaussianPotential>(lambda);
}

// Gaussian sampled into a table, to exercise the spline + numeric-transform
// route against the closed forms.
TabulatedPotential tabulated_gaussian(double lambda = 1.0) {
  std::vector<double> r, u;
  const GaussianPotential g(lambda);
  for (int i = 0; i <= 4000; ++i) {
    const double rr = 1e-3 + 8.0 * lambda * i / 4000.0;
    r.push_back(rr);
    u.push_back(g.u_radial(rr));
  }
  return TabulatedPotential(std::move(r), std::move(u), g.temperedness());
}

}  // namespace

TEST_CASE("gaussian potential basics") {
  const auto p = gauss(1.0);
  const double x0[2] = {0.0, 0.0};
  CHECK(mayer_v(*p, 1.0, x0) == doctest::Approx(1.0));  // log divergence at contact
  const double x1[2] = {1.0, 0.0};
  CHECK(mayer_v(*p, 1.0, x1) == doctest::Approx(std::exp(-kPi)).epsilon(1e-14));
  const double x1n[2] = {-1.0, 0.0};
  CHECK(mayer_v(*p, 1.0, x1) == mayer_v(*p, 1.0, x1n));  // evenness
  CHECK(mayer_v(*p, 0.0, x1) == 0.0);                    // u absent at beta = 0

  for (int d = 1; d <= 3; ++d) CHECK(vhat0(*p, d) == doctest::Approx(1.0));
  const auto p2 = gauss(1.7);
  for (int d = 1; d <= 3; ++d)
    CHECK(vhat0(*p2, d) == doctest::Approx(std::pow(1.7, d)).epsilon(1e-14));
  CHECK(fourier_vhat_radial(*p2, 2, 1.0 / 1.7) ==
        doctest::Approx(1.7 * 1.7 * std::exp(-kPi)).epsilon(1e-14));
  CHECK(fourier_vhat_radial(*p2, 2, 0.5) == fourier_vhat_radial(*p2, 2, -0.5));
}

TEST_CASE("mayer function stays below one") {
  const auto p = gauss(0.8);
  const auto tab = tabulated_gaussian(1.2);
  for (int i = 0; i <= 200; ++i) {
    const double x[1] = {0.02 * i};
    for (double beta : {0.3, 1.0, 4.0}) {
      const double vg = mayer_v(*p, beta, x);
      CHECK(vg <= 1.0);
      CHECK(vg >= 0.0);  // repulsive example
      CHECK(mayer_v(tab, beta, x) <= 1.0);
    }
  }
}

TEST_CASE("temperedness metadata bounds the tail") {
  const auto p = gauss(1.3);
  const auto t = p->temperedness();
  for (double r = t.R * 1.01; r < 8.0; r *= 1.37) {
    CHECK(std::abs(p->u_radial(r)) <= t.c * std::pow(r, -t.eta));
  }
}

TEST_CASE("dimensionless rescaling") {
  const auto p = gauss(1.0);
  const double y[2] = {0.25, 0.0};
  CHECK(v_beta(*p, 1.0, y) == doctest::Approx(p->v_radial(0.25)));
  const double y0[2] = {0.0, 0.0};
  CHECK(v_beta(*p, 1.0, y0) == doctest::Approx(1.0));
  const double yh[2] = {0.5, 0.0};
  CHECK(v_beta(*p, 2.0, yh) == doctest::Approx(std::exp(-kPi)).epsilon(1e-14));

  // transform identity: vhat(kappa)/lb^d = vhat_beta(lb * kappa)
  for (double lb : {0.5, 1.0, 2.0}) {
    for (double kappa : {0.0, 0.3, 1.1}) {
      const double lhs = fourier_vhat_radial(*p, 2, kappa) / (lb * lb);
      CHECK(vhat_beta(*p, 2, lb, lb * kappa) == doctest::Approx(lhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("numeric radial transform matches the closed form") {
  const auto tab = tabulated_gaussian(1.0);
  CHECK_FALSE(tab.has_closed_vhat());
  for (int d = 1; d <= 3; ++d) {
    for (double kappa : {0.0, 0.4, 1.0}) {
      const double closed = std::exp(-kPi * kappa * kappa);
      CHECK(fourier_vhat_radial(tab, d, kappa) == doctest::Approx(closed).epsilon(2e-4));
    }
  }
}

TEST_CASE("transform route errors without a closed form or numeric support") {
  struct Opaque final : PairPotential {
    std::string name() const override { return "opaque"; }
    double u_radial(double) const override { return 0.0; }
    Temperedness temperedness() const override { return {4, 1, 1}; }
    double length_scale() const override { return 1.0; }
  } opaque;
  CHECK_THROWS_AS(fourier_vhat_radial(opaque, 1, 0.0), Error);
}

TEST_CASE("integral of u") {
  const auto p = gauss(1.4);
  // d = 2 closed form: lambda^2 pi^2/6
  CHECK(integral_u(*p, 2) ==
        doctest::Approx(1.4 * 1.4 * kPi * kPi / 6.0).epsilon(1e-12));
  // independent numeric check at d = 1; the log singularity at the origin
  // limits the midpoint oracle to a few digits
  double acc = 0.0;
  const int steps = 400000;
  const double rmax = 12.0;
  for (int i = 0; i < steps; ++i) {
    const double r = (i + 0.5) * rmax / steps;
    acc += p->u_radial(r) * (rmax / steps);
  }
  CHECK(integral_u(*p, 1) == doctest::Approx(2.0 * acc).epsilon(1e-4));
}

TEST_CASE("zero potential") {
  ZeroPotential z;
  const double x[1] = {0.7};
  CHECK(mayer_v(z, 3.0, x) == 0.0);
  CHECK(vhat0(z, 2) == 0.0);
  const auto pot = PeriodizedPotential(std::make_shared<ZeroPotential>(), 1, 5.0);
  CHECK(pot.e_hat1(0).value == doctest::Approx(1.0));
  CHECK(pot.e_hat1(3).value == doctest::Approx(0.0));
  CHECK(pot.e_hat1(3, EhatPath::Quadrature).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("periodized potential and its Fourier coefficients") {
  const auto pot = PeriodizedPotential(gauss(1.0), 1, 8.0);

  // E-hat_L(0) = 1 - (1/L) int v_L, with the integral done independently
  const int steps = 1 << 16;
  double vl = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double y = -4.0 + 8.0 * (i + 0.5) / steps;
    double prod = 1.0;
    for (int w = -3; w <= 3; ++w) {
      const double s = y + 8.0 * w;
      prod *= 1.0 - std::exp(-kPi * s * s);
    }
    vl += (1.0 - prod) * (8.0 / steps);
  }
  const double expected0 = 1.0 - vl / 8.0;
  CHECK(pot.e_hat1(0, EhatPath::Quadrature).value ==
        doctest::Approx(expected0).epsilon(1e-10));
  CHECK(pot.e_hat1(0, EhatPath::Unfolded).value ==
        doctest::Approx(expected0).epsilon(1e-10));

  // unfolded form at nonzero z
  const auto fast = pot.e_hat1(3, EhatPath::Unfolded);
  CHECK(fast.value ==
        doctest::Approx(-(1.0 / 8.0) * std::exp(-kPi * 9.0 / 64.0)).epsilon(1e-12));

  // paths agree to within 1e-10 at L/lambda = 8
  for (int z = 0; z <= 4; ++z) {
    const auto q = pot.e_hat1(z, EhatPath::Quadrature);
    const auto f = pot.e_hat1(z, EhatPath::Unfolded);
    CHECK(std::abs(q.value - f.value) <= 1e-10);
    CHECK(std::abs(q.value - f.value) <= q.error_bound + f.error_bound + 1e-13);
  }

  // evenness
  CHECK(pot.e_hat1(2).value == pot.e_hat1(-2).value);
  CHECK(pot.e_hat1(2, EhatPath::Quadrature).value ==
        pot.e_hat1(-2, EhatPath::Quadrature).value);
}

TEST_CASE("paths agree within the documented bound at L/lambda = 4") {
  const auto pot = PeriodizedPotential(gauss(1.0), 1, 4.0);
  for (int z = 0; z <= 3; ++z) {
    const auto q = pot.e_hat1(z, EhatPath::Quadrature);
    const auto f = pot.e_hat1(z, EhatPath::Unfolded);
    CHECK(std::abs(q.value - f.value) <= q.error_bound + f.error_bound + 1e-14);
  }
}

TEST_CASE("quadrature-path values converge to the unfolded transform") {
  // fixed kappa = z/L = 1/4: L^d E-hat_L(z != 0) -> -vhat(kappa)
  const double target = -std::exp(-kPi / 16.0);
  double prev = 1e9;
  for (double L : {4.0, 8.0, 16.0}) {
    const auto pot = PeriodizedPotential(gauss(1.0), 1, L);
    const int z = static_cast<int>(L / 4.0);
    const double scaled = L * pot.e_hat1(z, EhatPath::Quadrature).value;
    const double err = std::abs(scaled - target);
    CHECK(err < prev + 1e-12);
    prev = err;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("insufficient quadrature resolution raises an accuracy error") {
  const auto pot = PeriodizedPotential(gauss(1.0), 1, 8.0);
  CHECK_THROWS_AS(pot.e_hat1(1, EhatPath::Quadrature, 1e-13, 8), Error);
  try {
    pot.e_hat1(1, EhatPath::Quadrature, 1e-13, 8);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Accuracy);
  }
}

TEST_CASE("two-dimensional coefficients") {
  const auto pot = PeriodizedPotential(gauss(1.0), 2, 6.0);
  const int z[2] = {1, 2};
  const auto q = pot.e_hat(z, EhatPath::Quadrature, 0.0, 96);
  const auto f = pot.e_hat(z, EhatPath::Unfolded);
  CHECK(q.value == doctest::Approx(f.value).epsilon(1e-8));
  const int zneg[2] = {-1, -2};
  CHECK(pot.e_hat(zneg, EhatPath::Unfolded).value == f.value);
}

TEST_CASE("tabulated potential from file") {
  const std::string path = "tab_potential_test.txt";
  {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    REQUIRE(fp);
    std::fputs("# r u\n", fp);
    for (int i = 0; i <= 50; ++i) {
      const double r = 0.05 + 0.1 * i;
      std::fprintf(fp, "%.17g %.17g\n", r, std::exp(-r));
    }
    std::fclose(fp);
  }
  const auto tab = TabulatedPotential::from_file(path, {4.0, 5.0, 1.0});
  CHECK(tab.u_radial(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(tab.u_radial(100.0) == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(TabulatedPotential::from_file("missing_file.txt", {4, 1, 1}), Error);
}
