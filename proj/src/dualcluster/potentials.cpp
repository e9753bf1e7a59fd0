#include "dualcluster/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dualcluster/errors.hpp"
#include "dualcluster/series.hpp"

namespace dualcluster::potentials {

namespace {
constexpr double kPi = std::numbers::pi;
}

double PairPotential::vhat_closed(int, double) const {
  throw Error(ErrorKind::Usage, "unsupported: no closed-form transform for " + name());
}

double PairPotential::integral_u_closed(int) const {
  throw Error(ErrorKind::Usage, "unsupported: no closed-form potential integral for " + name());
}

double PairPotential::v_radial(double r) const {
  return -std::expm1(-u_radial(r));
}

GaussianPotential::GaussianPotential(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Usage, "gaussian: lambda must be positive");
}

std::string GaussianPotential::name() const {
  return "gaussian{lambda=" + std::to_string(lambda_) + "}";
}

double GaussianPotential::u_radial(double r) const {
  // -ln(1 - e^{-pi r^2/lambda^2}); +inf at the origin
  const double s = kPi * r * r / (lambda_ * lambda_);
  return -std::log1p(-std::exp(-s));
}

Temperedness GaussianPotential::temperedness() const {
  // decay is Gaussian; any power law bounds it with a generous constant
  return {10.0, 2.0 * lambda_, 4.0 * std::pow(lambda_, 10.0)};
}

double GaussianPotential::vhat_closed(int d, double kappa) const {
  return std::pow(lambda_, d) * std::exp(-kPi * lambda_ * lambda_ * kappa * kappa);
}

double GaussianPotential::integral_u_closed(int d) const {
  // expand -ln(1 - e^{-s}) in Gaussians: int u = lambda^d zeta(1 + d/2)
  return std::pow(lambda_, d) * series::zeta(1.0 + 0.5 * d);
}

TabulatedPotential::TabulatedPotential(std::vector<double> r, std::vector<double> u,
                                       Temperedness t)
    : r_(std::move(r)), u_(std::move(u)), tempered_(t) {
  if (r_.size() < 3 || r_.size() != u_.size())
    throw Error(ErrorKind::Usage, "tabulated: need at least 3 (r,u) samples");
  if (!std::is_sorted(r_.begin(), r_.end()))
    throw Error(ErrorKind::Usage, "tabulated: radii must ascend");
  // natural cubic spline second derivatives
  const size_t n = r_.size();
  y2_.assign(n, 0.0);
  std::vector<double> tmp(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double sig = (r_[i] - r_[i - 1]) / (r_[i + 1] - r_[i - 1]);
    const double p = sig * y2_[i - 1] + 2.0;
    y2_[i] = (sig - 1.0) / p;
    tmp[i] = (u_[i + 1] - u_[i]) / (r_[i + 1] - r_[i]) -
             (u_[i] - u_[i - 1]) / (r_[i] - r_[i - 1]);
    tmp[i] = (6.0 * tmp[i] / (r_[i + 1] - r_[i - 1]) - sig * tmp[i - 1]) / p;
  }
  for (size_t k = n - 1; k-- > 1;) y2_[k] = y2_[k] * y2_[k + 1] + tmp[k];
  y2_.front() = y2_.back() = 0.0;
}

TabulatedPotential TabulatedPotential::from_file(const std::string& path, Temperedness t) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open potential table " + path);
  std::vector<double> r, u;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double rv = 0.0, uv = 0.0;
    if (ls >> rv >> uv) {
      r.push_back(rv);
      u.push_back(uv);
    }
  }
  return TabulatedPotential(std::move(r), std::move(u), t);
}

double TabulatedPotential::u_radial(double r) const {
  if (r <= r_.front()) return u_.front();
  if (r >= r_.back()) return 0.0;
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const size_t hi = static_cast<size_t>(it - r_.begin());
  const size_t lo = hi - 1;
  const double h = r_[hi] - r_[lo];
  const double a = (r_[hi] - r) / h;
  const double b = (r - r_[lo]) / h;
  return a * u_[lo] + b * u_[hi] +
         ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

double TabulatedPotential::length_scale() const { return r_.back(); }

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double mayer_v(const PairPotential& p, double beta, std::span<const double> x) {
  if (beta < 0.0) throw Error(ErrorKind::Usage, "mayer_v: beta must be nonnegative");
  return -std::expm1(-beta * p.u_radial(norm(x)));
}

double sphere_surface(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default:
      return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
  }
}

namespace {

// Composite midpoint over [0, r_max]; dense enough for the smooth decaying
// radial profiles handled here.
template <typename F>
double radial_integral(F f, double r_max, int points) {
  const double h = r_max / points;
  double s = 0.0;
  for (int i = 0; i < points; ++i) {
    const double r = (i + 0.5) * h;
    s += f(r);
  }
  return s * h;
}

double radial_reach(const PairPotential& p) {
  // smallest radius beyond which v is numerically negligible
  const double scale = p.length_scale();
  double r = 0.125 * scale;
  while (r < 512.0 * scale &&
         (p.v_radial(r) > 1e-18 || p.v_radial(1.5 * r) > 1e-18 || p.v_radial(2.25 * r) > 1e-18))
    r *= 1.5;
  return r;
}

}  // namespace

double fourier_vhat_radial(const PairPotential& p, int d, double kappa) {
  if (p.has_closed_vhat()) return p.vhat_closed(d, std::abs(kappa));
  if (!p.supports_numeric_vhat())
    throw Error(ErrorKind::Usage,
                "unsupported: no transform route configured for " + p.name());
  const double k = std::abs(kappa);
  const double r_max = radial_reach(p);
  // resolve the oscillation, but cap the work for far-tail requests
  const int points =
      std::min(1 << 18, std::max(4096, static_cast<int>(64.0 * k * r_max) + 1));
  switch (d) {
    case 1:
      return 2.0 * radial_integral(
                       [&](double r) { return std::cos(2.0 * kPi * k * r) * p.v_radial(r); },
                       r_max, points);
    case 2:
      return 2.0 * kPi *
             radial_integral(
                 [&](double r) {
                   return std::cyl_bessel_j(0, 2.0 * kPi * k * r) * r * p.v_radial(r);
                 },
                 r_max, points);
    case 3:
      if (k < 1e-12) {
        return 4.0 * kPi *
               radial_integral([&](double r) { return r * r * p.v_radial(r); }, r_max, points);
      }
      return (2.0 / k) *
             radial_integral(
                 [&](double r) { return std::sin(2.0 * kPi * k * r) * r * p.v_radial(r); },
                 r_max, points);
    default:
      throw Error(ErrorKind::Usage, "numeric radial transform supports d <= 3");
  }
}

double fourier_vhat(const PairPotential& p, int d, std::span<const double> kappa) {
  return fourier_vhat_radial(p, d, norm(kappa));
}

double vhat0(const PairPotential& p, int d) { return fourier_vhat_radial(p, d, 0.0); }

double v_beta(const PairPotential& p, double lambda_beta, std::span<const double> y) {
  if (!(lambda_beta > 0.0)) throw Error(ErrorKind::Usage, "lambda_beta must be positive");
  return p.v_radial(lambda_beta * norm(y));
}

double vhat_beta(const PairPotential& p, int d, double lambda_beta, double kappa) {
  return fourier_vhat_radial(p, d, kappa / lambda_beta) / std::pow(lambda_beta, d);
}

double integral_u(const PairPotential& p, int d) {
  if (p.has_closed_integral_u()) return p.integral_u_closed(d);
  const double r_max = radial_reach(p);
  const double val = sphere_surface(d) *
                     radial_integral(
                         [&](double r) { return std::pow(r, d - 1) * p.u_radial(r); },
                         r_max, 1 << 16);
  if (!std::isfinite(val))
    throw Error(ErrorKind::Accuracy, "integral of u did not evaluate finitely");
  return val;
}

PeriodizedPotential::PeriodizedPotential(std::shared_ptr<const PairPotential> base, int d,
                                         double L, double beta, int images)
    : base_(std::move(base)), d_(d), L_(L), beta_(beta), images_(images) {
  if (!base_) throw Error(ErrorKind::Usage, "periodized potential needs a base potential");
  if (d < 1 || d > 2) throw Error(ErrorKind::Usage, "periodized potential supports d in {1,2}");
  if (!(L > 0.0)) throw Error(ErrorKind::Usage, "box side must be positive");
}

double PeriodizedPotential::u_L(std::span<const double> y) const {
  double s = 0.0;
  std::vector<double> shifted(static_cast<size_t>(d_));
  std::vector<int> w(static_cast<size_t>(d_), -images_);
  for (;;) {
    for (int c = 0; c < d_; ++c) shifted[static_cast<size_t>(c)] = y[static_cast<size_t>(c)] + L_ * w[static_cast<size_t>(c)];
    s += base_->u_radial(norm(shifted));
    int c = 0;
    while (c < d_ && ++w[static_cast<size_t>(c)] > images_) w[static_cast<size_t>(c++)] = -images_;
    if (c == d_) break;
  }
  return s;
}

double PeriodizedPotential::E_L(std::span<const double> y) const {
  // product over images of e^{-beta u}; formed factor-wise so that a single
  // divergent image (e.g. the log singularity at contact) cleanly gives 0
  double prod = 1.0;
  std::vector<double> shifted(static_cast<size_t>(d_));
  std::vector<int> w(static_cast<size_t>(d_), -images_);
  for (;;) {
    for (int c = 0; c < d_; ++c) shifted[static_cast<size_t>(c)] = y[static_cast<size_t>(c)] + L_ * w[static_cast<size_t>(c)];
    prod *= std::exp(-beta_ * base_->u_radial(norm(shifted)));
    if (prod == 0.0) return 0.0;
    int c = 0;
    while (c < d_ && ++w[static_cast<size_t>(c)] > images_) w[static_cast<size_t>(c++)] = -images_;
    if (c == d_) break;
  }
  return prod;
}

double PeriodizedPotential::unfold_error_bound() const {
  // | v_L - sum_z v(.+Lz) | <= sum over image pairs of the overlap integral;
  // bounded by sup-decay of v at half the pair separation times int |v|.
  const double vint = std::abs(fourier_vhat_radial(*base_, d_, 0.0)) + 1e-300;
  double bound = 0.0;
  const int reach = 5;
  std::vector<int> a(static_cast<size_t>(d_), -reach);
  for (;;) {
    double a2 = 0.0;
    for (int c = 0; c < d_; ++c) a2 += static_cast<double>(a[static_cast<size_t>(c)]) * a[static_cast<size_t>(c)];
    if (a2 > 0.0) {
      const double sep = 0.5 * L_ * std::sqrt(a2);
      bound += std::min(1.0, base_->v_radial(sep)) * vint;
    }
    int c = 0;
    while (c < d_ && ++a[static_cast<size_t>(c)] > reach) a[static_cast<size_t>(c++)] = -reach;
    if (c == d_) break;
  }
  return 2.0 * bound / std::pow(L_, d_);
}

EhatResult PeriodizedPotential::e_hat(std::span<const int> z, EhatPath path, double tol,
                                      int points_per_axis) const {
  if (static_cast<int>(z.size()) != d_)
    throw Error(ErrorKind::Usage, "e_hat: z has wrong dimension");
  EhatResult res;
  res.path = path;

  if (path == EhatPath::Unfolded) {
    double z2 = 0.0;
    bool zero = true;
    for (int c = 0; c < d_; ++c) {
      z2 += static_cast<double>(z[static_cast<size_t>(c)]) * z[static_cast<size_t>(c)];
      zero = zero && z[static_cast<size_t>(c)] == 0;
    }
    const double kappa = std::sqrt(z2) / L_;
    res.value = (zero ? 1.0 : 0.0) -
                fourier_vhat_radial(*base_, d_, kappa) / std::pow(L_, d_);
    res.error_bound = unfold_error_bound();
  } else {
    const int m = points_per_axis > 0 ? points_per_axis : (d_ == 1 ? 4096 : 256);
    auto quad = [&](int points) {
      const double h = L_ / points;
      double acc = 0.0;
      std::vector<double> y(static_cast<size_t>(d_));
      std::vector<int> idx(static_cast<size_t>(d_), 0);
      for (;;) {
        double phase = 0.0;
        for (int c = 0; c < d_; ++c) {
          y[static_cast<size_t>(c)] = -0.5 * L_ + (idx[static_cast<size_t>(c)] + 0.5) * h;
          phase += z[static_cast<size_t>(c)] * y[static_cast<size_t>(c)];
        }
        acc += std::cos(2.0 * kPi * phase / L_) * E_L(y);
        int c = 0;
        while (c < d_ && ++idx[static_cast<size_t>(c)] >= points) idx[static_cast<size_t>(c++)] = 0;
        if (c == d_) break;
      }
      return acc / std::pow(static_cast<double>(points), d_);
    };
    const double fine = quad(m);
    const double coarse = quad(m / 2);
    res.value = fine;
    res.error_bound = std::abs(fine - coarse);
  }

  if (tol > 0.0 && res.error_bound > tol) {
    throw Error(ErrorKind::Accuracy,
                "e_hat error bound " + std::to_string(res.error_bound) +
                    " exceeds requested tolerance " + std::to_string(tol) +
                    (path == EhatPath::Quadrature ? " (increase the grid resolution)"
                                                  : " (increase L or use quadrature)"));
  }
  return res;
}

EhatResult PeriodizedPotential::e_hat1(int z, EhatPath path, double tol,
                                       int points_per_axis) const {
  const int zv[1] = {z};
  return e_hat(std::span<const int>(zv, 1), path, tol, points_per_axis);
}

}  // namespace dualcluster::potentials
