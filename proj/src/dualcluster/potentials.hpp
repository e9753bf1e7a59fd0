#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dualcluster::potentials {

// Tail metadata: |u(x)| <= c |x|^-eta for |x| > R, with eta > d.
struct Temperedness {
  double eta = 0.0;
  double R = 0.0;
  double c = 0.0;
};

// Isotropic translation-invariant pair potential. Energies use the
// beta-absorbed convention: the stored u already contains the inverse
// temperature, so v(x) = 1 - e^{-u(x)} and all temperature dependence of
// the expansion is carried by the thermal wavelength.
class PairPotential {
 public:
  virtual ~PairPotential() = default;

  virtual std::string name() const = 0;
  virtual double u_radial(double r) const = 0;
  virtual Temperedness temperedness() const = 0;
  // length scale used for quadrature ranges and proposal widths
  virtual double length_scale() const = 0;

  virtual bool has_closed_vhat() const { return false; }
  virtual double vhat_closed(int d, double kappa) const;

  // numeric radial transform permitted (isotropic, integrable v)
  virtual bool supports_numeric_vhat() const { return false; }

  // closed form for the integral of u over R^d, when known
  virtual bool has_closed_integral_u() const { return false; }
  virtual double integral_u_closed(int d) const;

  double v_radial(double r) const;  // 1 - e^{-u}
};

// v-hat(kappa) = lambda^d exp(-pi lambda^2 kappa^2); v(x) = exp(-pi x^2/lambda^2);
// u(x) = -ln(1 - e^{-pi x^2 / lambda^2}), purely repulsive, log-divergent at 0.
class GaussianPotential final : public PairPotential {
 public:
  explicit GaussianPotential(double lambda);
  std::string name() const override;
  double u_radial(double r) const override;
  Temperedness temperedness() const override;
  double length_scale() const override { return lambda_; }
  bool has_closed_vhat() const override { return true; }
  double vhat_closed(int d, double kappa) const override;
  bool supports_numeric_vhat() const override { return true; }
  bool has_closed_integral_u() const override { return true; }
  double integral_u_closed(int d) const override;  // lambda^d zeta(1 + d/2)
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// u identically zero (ideal gas).
class ZeroPotential final : public PairPotential {
 public:
  std::string name() const override { return "zero"; }
  double u_radial(double) const override { return 0.0; }
  Temperedness temperedness() const override { return {4.0, 1.0, 0.0}; }
  double length_scale() const override { return 1.0; }
  bool has_closed_vhat() const override { return true; }
  double vhat_closed(int, double) const override { return 0.0; }
  bool supports_numeric_vhat() const override { return true; }
  bool has_closed_integral_u() const override { return true; }
  double integral_u_closed(int) const override { return 0.0; }
};

// Radial samples (r, u) with natural cubic spline interpolation; u = 0
// beyond the last knot. File format: two whitespace-separated columns,
// ascending radius.
class TabulatedPotential final : public PairPotential {
 public:
  TabulatedPotential(std::vector<double> r, std::vector<double> u, Temperedness t);
  static TabulatedPotential from_file(const std::string& path, Temperedness t);

  std::string name() const override { return "tabulated"; }
  double u_radial(double r) const override;
  Temperedness temperedness() const override { return tempered_; }
  double length_scale() const override;
  bool supports_numeric_vhat() const override { return true; }

 private:
  std::vector<double> r_, u_, y2_;  // knots, values, spline second derivatives
  Temperedness tempered_;
};

// ---- free-standing transforms ----

double norm(std::span<const double> x);

// 1 - e^{-beta u(x)}
double mayer_v(const PairPotential& p, double beta, std::span<const double> x);

// v-hat at a d-vector kappa; closed form when available, else a numeric
// radial transform. Throws Error(Usage, "unsupported...") when neither path
// exists.
double fourier_vhat(const PairPotential& p, int d, std::span<const double> kappa);
double fourier_vhat_radial(const PairPotential& p, int d, double kappa);
double vhat0(const PairPotential& p, int d);

// dimensionless rescaling: v_beta(y) = v(lambda_beta * y)
double v_beta(const PairPotential& p, double lambda_beta, std::span<const double> y);
// its transform: vhat_beta(kappa) = vhat(kappa / lambda_beta) / lambda_beta^d
double vhat_beta(const PairPotential& p, int d, double lambda_beta, double kappa);

// integral of u over R^d (closed form or numeric radial); used by the
// activity bounds
double integral_u(const PairPotential& p, int d);

// surface of the unit (d-1)-sphere
double sphere_surface(int d);

// ---- periodized finite-volume potential ----

enum class EhatPath { Quadrature, Unfolded };

struct EhatResult {
  double value = 0.0;
  EhatPath path = EhatPath::Unfolded;
  double error_bound = 0.0;
};

// Pair Boltzmann factor on the torus of side L: u_L(x) = sum_z u(x + L z)
// truncated at |z|_inf <= images, E_L = e^{-beta u_L}.
class PeriodizedPotential {
 public:
  PeriodizedPotential(std::shared_ptr<const PairPotential> base, int d, double L,
                      double beta = 1.0, int images = 3);

  int dim() const { return d_; }
  double L() const { return L_; }
  double beta() const { return beta_; }
  const PairPotential& base() const { return *base_; }

  double u_L(std::span<const double> y) const;
  double E_L(std::span<const double> y) const;  // product over images of e^{-beta u}
  double v_L(std::span<const double> y) const { return 1.0 - E_L(y); }

  // Fourier coefficient E-hat_L(z) = L^-d int_Lambda e^{-i 2pi z.y/L} E_L(y) dy.
  //  - Quadrature: composite midpoint on a uniform grid (d <= 2), Richardson
  //    step-halving error estimate; spectrally accurate for smooth E_L.
  //  - Unfolded: delta_{z,0} - L^-d vhat(z/L); the folding error bound is
  //    exponentially small once L clears the interaction range.
  // Throws Error(Accuracy) when the error bound exceeds tol (tol <= 0: no check).
  EhatResult e_hat(std::span<const int> z, EhatPath path = EhatPath::Unfolded,
                   double tol = 0.0, int points_per_axis = 0) const;
  EhatResult e_hat1(int z, EhatPath path = EhatPath::Unfolded, double tol = 0.0,
                    int points_per_axis = 0) const;

 private:
  double unfold_error_bound() const;

  std::shared_ptr<const PairPotential> base_;
  int d_;
  double L_;
  double beta_;
  int images_;
};

}  // namespace dualcluster::potentials
