#include <doctest.h>

#include <cmath>
#include <memory>

#include "dualcluster/errors.hpp"
#include "dualcluster/oracle.hpp"

using namespace dualcluster;
using namespace dualcluster::oracle;

namespace {

std::shared_ptr<const potentials::PairPotential> gauss(double lambda = 1.0) {
  return std::make_shared<potentials::GaussianPotential>(lambda);
}

std::shared_ptr<const potentials::PairPotential> zero() {
  return std::make_shared<potentials::ZeroPotential>();
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

TEST_CASE("fixed small orders") {
  const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
  FiniteSystem sys{0, 1.0, &pot};
  CHECK(q_direct(sys).value == 1.0);
  sys.N = 1;
  CHECK(q_direct(sys).value == doctest::Approx(8.0));
  CHECK(q_momentum(sys).value == doctest::Approx(8.0));
}

TEST_CASE("free particles integrate exactly") {
  // d = 1 grid
  {
    const auto pot = potentials::PeriodizedPotential(zero(), 1, 6.0);
    for (int N = 2; N <= 4; ++N) {
      FiniteSystem sys{N, 1.0, &pot};
      const double expect = std::pow(6.0, N) / factorial(N);
      CHECK(q_direct(sys).value == doctest::Approx(expect).epsilon(1e-12));
      MomentumOptions mopts;
      mopts.zmax = 8;
      mopts.allow_n4 = true;
      CHECK(q_momentum(sys, mopts).value == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  // d = 2 Monte Carlo: the integrand is constant, so the estimate is exact
  {
    const auto pot = potentials::PeriodizedPotential(zero(), 2, 4.0);
    FiniteSystem sys{3, 1.0, &pot};
    DirectOptions opts;
    opts.samples = 20000;
    const auto v = q_direct(sys, opts);
    CHECK(v.value == doctest::Approx(std::pow(16.0, 3) / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("two particles reduce to the zero Fourier coefficient") {
  for (int d = 1; d <= 2; ++d) {
    const auto pot = potentials::PeriodizedPotential(gauss(), d, 6.0);
    FiniteSystem sys{2, 1.3, &pot};
    const double ehat0 = pot.e_hat(std::vector<int>(static_cast<size_t>(d), 0),
                                   potentials::EhatPath::Quadrature)
                             .value;
    const double expect = std::pow(6.0 / 1.3, 2.0 * d) / 2.0 * ehat0;
    DirectOptions opts;
    opts.resolution = d == 1 ? 4096 : 512;
    const auto v = q_direct(sys, opts);
    CHECK(v.value == doctest::Approx(expect).epsilon(1e-9));
    const auto m = q_momentum(sys);
    CHECK(m.value == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("direct and momentum oracles agree at N = 3") {
  // d = 1: both deterministic
  {
    const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
    FiniteSystem sys{3, 1.0, &pot};
    const auto a = q_direct(sys);
    const auto b = q_momentum(sys);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-10 * std::abs(a.value));
    CHECK(a.value > 0.0);
    CHECK(b.value > 0.0);
  }
  // d = 2: Monte Carlo vs lattice
  {
    const auto pot = potentials::PeriodizedPotential(gauss(), 2, 5.0);
    FiniteSystem sys{3, 1.0, &pot};
    DirectOptions opts;
    opts.samples = 400000;
    opts.seed = 9;
    const auto a = q_direct(sys, opts);
    MomentumOptions mopts;
    mopts.zmax = 24;
    const auto b = q_momentum(sys, mopts);
    CHECK(std::abs(a.value - b.value) <= 3.0 * a.error + b.error + 1e-9 * std::abs(b.value));
  }
}

TEST_CASE("optional N = 4 momentum sum") {
  const auto pot = potentials::PeriodizedPotential(gauss(), 1, 6.0);
  FiniteSystem sys{4, 1.0, &pot};
  CHECK_THROWS_AS(q_momentum(sys), Error);  // behind the budget flag
  MomentumOptions mopts;
  mopts.zmax = 24;
  mopts.allow_n4 = true;
  const auto m = q_momentum(sys, mopts);
  DirectOptions dopts;
  dopts.resolution = 512;
  const auto dvt = q_direct(sys, dopts);
  CHECK(std::abs(m.value - dvt.value) <=
        m.error + dvt.error + 1e-7 * std::abs(dvt.value));
}

TEST_CASE("oracle capacity gates") {
  const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
  FiniteSystem sys{5, 1.0, &pot};
  CHECK_THROWS_AS(q_direct(sys), Error);
  CHECK_THROWS_AS(q_momentum(sys), Error);
  const auto pot2 = potentials::PeriodizedPotential(gauss(), 2, 8.0);
  FiniteSystem sys2{4, 1.0, &pot2};
  CHECK_THROWS_AS(q_direct(sys2), Error);
}

TEST_CASE("partition values are positive and log-ratios grow") {
  const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
  double prev_ratio = -1e300;
  double prev_q = 1.0;
  for (int N = 1; N <= 4; ++N) {
    FiniteSystem sys{N, 1.0, &pot};
    DirectOptions opts;
    opts.resolution = N == 4 ? 512 : 4096;
    const double q = q_direct(sys, opts).value;
    CHECK(q > 0.0);
    const double ratio = std::log(prev_q / q);
    CHECK(ratio > prev_ratio);
    prev_ratio = ratio;
    prev_q = q;
  }
}

TEST_CASE("recurrence residuals") {
  // trivial order: reduces to Q_1 = L^d / lambda_beta^d
  {
    const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
    FiniteSystem sys{1, 1.0, &pot};
    const auto rep = recurrence_residual(sys);
    CHECK(rep.residual_rel <= 1e-12);
  }
  // free particles: only n = 1 contributes
  {
    const auto pot = potentials::PeriodizedPotential(zero(), 1, 8.0);
    for (int N = 1; N <= 4; ++N) {
      FiniteSystem sys{N, 1.0, &pot};
      DirectOptions dopts;
      dopts.resolution = N == 4 ? 512 : 4096;
      const auto rep = recurrence_residual(sys, dopts);
      CHECK(rep.residual_rel <= 1e-11);
    }
  }
  // interacting N = 2 and N = 3
  {
    const auto pot = potentials::PeriodizedPotential(gauss(), 1, 8.0);
    for (int N : {2, 3}) {
      FiniteSystem sys{N, 1.0, &pot};
      const auto rep = recurrence_residual(sys);
      CHECK(rep.residual_rel <= 1e-8);
      CHECK_FALSE(rep.residual_exceeds_errors);
    }
  }
  // N = 4 pulls in the finite-volume q_4 lattice sums
  {
    const auto pot = potentials::PeriodizedPotential(gauss(), 1, 6.0);
    FiniteSystem sys{4, 1.0, &pot};
    DirectOptions dopts;
    dopts.resolution = 512;
    weights::FiniteLOptions fl;
    fl.zmax = 20;
    fl.tail_tol = 0.0;
    const auto rep = recurrence_residual(sys, dopts, fl);
    CHECK(rep.residual_rel <= 1e-6);
  }
}

TEST_CASE("finite-size factor ladder") {
  // zero potential: both sides are exactly 1
  {
    std::vector<double> ladder{4.0, 8.0};
    const auto rep = limit_factor_check(3, 0.5, zero(), 1, ladder);
    for (const auto& row : rep.rows) {
      CHECK(row.lhs == doctest::Approx(1.0));
      CHECK(row.rhs == doctest::Approx(1.0));
    }
    CHECK(rep.gap_monotone);
  }
  // gaussian example: the gap shrinks monotonically along the ladder
  {
    std::vector<double> ladder{8.0, 16.0, 32.0};
    const auto rep = limit_factor_check(3, 0.5, gauss(), 1, ladder);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].N == 4);
    CHECK(rep.rows[2].N == 16);
    CHECK(rep.gap_monotone);
    CHECK(std::abs(rep.rows[2].gap) < std::abs(rep.rows[0].gap));
    for (const auto& row : rep.rows)
      CHECK(row.rhs == doctest::Approx(std::exp(-1.5)).epsilon(1e-10));
  }
  // rho = 0 reduces both sides to 1
  {
    std::vector<double> ladder{8.0};
    const auto rep = limit_factor_check(3, 0.0, gauss(), 1, ladder);
    CHECK(rep.rows[0].lhs == doctest::Approx(1.0));
    CHECK(rep.rows[0].rhs == doctest::Approx(1.0));
  }
  // non-integer rho L^d is rejected
  {
    std::vector<double> ladder{7.0};
    CHECK_THROWS_AS(limit_factor_check(3, 0.5, gauss(), 1, ladder), Error);
  }
}
