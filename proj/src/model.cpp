#include "ldnet/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ldnet {

GainFunction GainFunction::logistic(double slope) {
  if (!(slope > 0.0)) throw std::invalid_argument("gain slope must be positive");
  GainFunction g;
  g.slope_ = slope;
  return g;
}

double GainFunction::operator()(double x) const {
  return 1.0 / (1.0 + std::exp(-slope_ * x));
}

InitLaw InitLaw::gaussian(double mean, double std) {
  if (!(std >= 0.0)) throw std::invalid_argument("init law std must be nonnegative");
  InitLaw l;
  l.kind_ = Kind::gaussian;
  l.a_ = mean;
  l.b_ = std;
  return l;
}

InitLaw InitLaw::point_mass(double value) {
  InitLaw l;
  l.kind_ = Kind::point_mass;
  l.a_ = value;
  l.b_ = 0.0;
  return l;
}

double InitLaw::mean() const { return a_; }

double InitLaw::variance() const {
  return kind_ == Kind::gaussian ? b_ * b_ : 0.0;
}

double InitLaw::from_standard_normal(double z) const {
  return kind_ == Kind::gaussian ? a_ + b_ * z : a_;
}

CorrelationKernel CorrelationKernel::dirac(double j_var) {
  if (!(j_var >= 0.0)) throw std::invalid_argument("dirac kernel needs j_var >= 0");
  CorrelationKernel k;
  k.kind_ = Kind::dirac;
  k.a_ = j_var;
  return k;
}

CorrelationKernel CorrelationKernel::separable_geometric(double a, double rho1,
                                                         double rho2) {
  if (!(a > 0.0)) throw std::invalid_argument("separable kernel needs a > 0");
  if (!(std::abs(rho1) < 1.0 && std::abs(rho2) < 1.0))
    throw std::invalid_argument("separable kernel needs |rho| < 1");
  CorrelationKernel k;
  k.kind_ = Kind::separable_geometric;
  k.a_ = a;
  k.rho1_ = rho1;
  k.rho2_ = rho2;
  return k;
}

CorrelationKernel CorrelationKernel::table(const Eigen::MatrixXd& values,
                                           int k_half, int l_half) {
  if (values.rows() != 2 * k_half + 1 || values.cols() != 2 * l_half + 1)
    throw std::invalid_argument("table kernel shape must be (2*k_half+1) x (2*l_half+1)");
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j) {
      double mirrored = values(values.rows() - 1 - i, values.cols() - 1 - j);
      if (values(i, j) != mirrored)
        throw std::invalid_argument("table kernel must satisfy Lambda(-k,-l) = Lambda(k,l)");
    }
  CorrelationKernel k;
  k.kind_ = Kind::table;
  k.tab_ = values;
  k.k_half_ = k_half;
  k.l_half_ = l_half;
  return k;
}

double CorrelationKernel::operator()(int k, int l) const {
  switch (kind_) {
    case Kind::dirac:
      return (k == 0 && l == 0) ? a_ : 0.0;
    case Kind::separable_geometric:
      return a_ * std::pow(rho1_, std::abs(k)) * std::pow(rho2_, std::abs(l));
    case Kind::table:
      if (std::abs(k) > k_half_ || std::abs(l) > l_half_) return 0.0;
      return tab_(k + k_half_, l + l_half_);
  }
  return 0.0;
}

namespace {
// sum_k rho^|k| = (1+rho)/(1-rho), valid for |rho| < 1
inline double geometric_lattice_sum(double rho) { return (1.0 + rho) / (1.0 - rho); }
}  // namespace

double CorrelationKernel::lambda_sum() const {
  switch (kind_) {
    case Kind::dirac:
      return a_;
    case Kind::separable_geometric:
      return a_ * geometric_lattice_sum(rho1_) * geometric_lattice_sum(rho2_);
    case Kind::table:
      return tab_.sum();
  }
  return 0.0;
}

double CorrelationKernel::lambda_abs_sum() const {
  switch (kind_) {
    case Kind::dirac:
      return std::abs(a_);
    case Kind::separable_geometric:
      return a_ * geometric_lattice_sum(std::abs(rho1_)) *
             geometric_lattice_sum(std::abs(rho2_));
    case Kind::table:
      return tab_.cwiseAbs().sum();
  }
  return 0.0;
}

namespace {
// sum_k rho^|k| e^{-ik omega} = (1-rho^2)/(1 - 2 rho cos(omega) + rho^2)
inline double geometric_transform(double rho, double omega) {
  return (1.0 - rho * rho) / (1.0 - 2.0 * rho * std::cos(omega) + rho * rho);
}
}  // namespace

double CorrelationKernel::fourier(double omega, double phi) const {
  switch (kind_) {
    case Kind::dirac:
      return a_;
    case Kind::separable_geometric:
      return a_ * geometric_transform(rho1_, omega) * geometric_transform(rho2_, phi);
    case Kind::table: {
      std::complex<double> s = 0.0;
      for (int k = -k_half_; k <= k_half_; ++k)
        for (int l = -l_half_; l <= l_half_; ++l)
          s += tab_(k + k_half_, l + l_half_) *
               std::exp(std::complex<double>(0.0, -(k * omega + l * phi)));
      // Lambda(-k,-l) = Lambda(k,l) makes the transform real.
      return s.real();
    }
  }
  return 0.0;
}

std::complex<double> CorrelationKernel::fourier_in_k(double omega, int l) const {
  switch (kind_) {
    case Kind::dirac:
      return l == 0 ? std::complex<double>(a_) : std::complex<double>(0.0);
    case Kind::separable_geometric:
      return a_ * geometric_transform(rho1_, omega) * std::pow(rho2_, std::abs(l));
    case Kind::table: {
      if (std::abs(l) > l_half_) return 0.0;
      std::complex<double> s = 0.0;
      for (int k = -k_half_; k <= k_half_; ++k)
        s += tab_(k + k_half_, l + l_half_) *
             std::exp(std::complex<double>(0.0, -k * omega));
      return s;
    }
  }
  return 0.0;
}

int CorrelationKernel::decay_lag(double tol, int cap) const {
  switch (kind_) {
    case Kind::dirac:
      return 0;
    case Kind::separable_geometric: {
      // tail over |k| > m: 2 a |rho1|^{m+1}/(1-|rho1|) * sum_l |rho2|^|l|
      double r = std::abs(rho1_);
      if (r == 0.0) return 0;
      double per_l = geometric_lattice_sum(std::abs(rho2_));
      double tail = 2.0 * a_ * r / (1.0 - r) * per_l;
      int m = 0;
      while (m < cap && tail >= tol) {
        tail *= r;
        ++m;
      }
      return m;
    }
    case Kind::table:
      return k_half_;
  }
  return cap;
}

std::vector<std::string> validate_params(const ModelParams& p) {
  std::vector<std::string> v;
  auto bad = [&](const std::string& msg) { v.push_back(msg); };
  if (p.n < 0) bad("n: must be >= 0 (got " + std::to_string(p.n) + ")");
  if (p.T < 1) bad("T: must be >= 1 (got " + std::to_string(p.T) + ")");
  if (!(p.gamma >= 0.0 && p.gamma < 1.0))
    bad("gamma: must lie in [0, 1) (got " + std::to_string(p.gamma) + ")");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    bad("sigma: must be positive (got " + std::to_string(p.sigma) + ")");
  if (!(p.theta_std >= 0.0) || !std::isfinite(p.theta_std))
    bad("theta_std: must be nonnegative (got " + std::to_string(p.theta_std) + ")");
  if (!std::isfinite(p.theta_bar)) bad("theta_bar: must be finite");
  if (!std::isfinite(p.j_bar)) bad("j_bar: must be finite");
  return v;
}

}  // namespace ldnet
