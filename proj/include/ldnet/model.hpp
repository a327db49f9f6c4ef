#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ldnet {

// Sigmoidal gain. Only the logistic family is wired up; slope defaults to 1.
class GainFunction {
 public:
  static GainFunction logistic(double slope = 1.0);

  double operator()(double x) const;
  double slope() const { return slope_; }
  double lipschitz_bound() const { return 0.25 * slope_; }

 private:
  double slope_ = 1.0;
};

class InitLaw {
 public:
  enum class Kind { gaussian, point_mass };

  static InitLaw gaussian(double mean, double std);
  static InitLaw point_mass(double value);

  Kind kind() const { return kind_; }
  double mean() const;
  double variance() const;
  // Pushes a standard normal through the law (point mass ignores z).
  double from_standard_normal(double z) const;

 private:
  Kind kind_ = Kind::gaussian;
  double a_ = 0.0;  // mean / point value
  double b_ = 1.0;  // std (gaussian only)
};

// Synaptic covariance profile Lambda(k,l) on the integer lattice, even under
// joint negation: Lambda(-k,-l) = Lambda(k,l).
class CorrelationKernel {
 public:
  enum class Kind { dirac, separable_geometric, table };

  static CorrelationKernel dirac(double j_var);
  static CorrelationKernel separable_geometric(double a, double rho1, double rho2);
  // values is (2*k_half+1) x (2*l_half+1), entry (k+k_half, l+l_half) = Lambda(k,l).
  static CorrelationKernel table(const Eigen::MatrixXd& values, int k_half, int l_half);

  Kind kind() const { return kind_; }
  double operator()(int k, int l) const;

  double lambda_sum() const;      // sum of Lambda over the lattice
  double lambda_abs_sum() const;  // sum of |Lambda| over the lattice

  // Full 2-D transform: sum_{k,l} Lambda(k,l) e^{-i(k omega + l phi)}.
  double fourier(double omega, double phi) const;
  // Partial transform in the first index: sum_k Lambda(k,l) e^{-ik omega}.
  std::complex<double> fourier_in_k(double omega, int l) const;

  // Smallest m with sum_{|k|>m, l} |Lambda(k,l)| < tol, capped at `cap`.
  int decay_lag(double tol, int cap = 512) const;

  double param_a() const { return a_; }
  double param_rho1() const { return rho1_; }
  double param_rho2() const { return rho2_; }

 private:
  Kind kind_ = Kind::dirac;
  double a_ = 0.0;     // dirac: j_var; separable: amplitude
  double rho1_ = 0.0;
  double rho2_ = 0.0;
  Eigen::MatrixXd tab_;
  int k_half_ = 0, l_half_ = 0;
};

struct ModelParams {
  int n = 0;  // half-width of the neuron window V_n = {-n..n}
  int T = 1;  // time horizon, paths live on {0..T}
  double gamma = 0.5;
  double sigma = 1.0;
  double theta_bar = 0.0;
  double theta_std = 0.0;
  double j_bar = 0.0;
  GainFunction gain = GainFunction::logistic();
  InitLaw init_law = InitLaw::gaussian(0.0, 1.0);

  int num_neurons() const { return 2 * n + 1; }
};

// Checks parameter ranges; returns one message per violation, empty if valid.
std::vector<std::string> validate_params(const ModelParams& p);

}  // namespace ldnet
