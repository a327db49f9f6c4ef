#include <doctest.h>

#include <cmath>
#include <complex>

#include "ldnet/model.hpp"

using namespace ldnet;

namespace {
const double kPi = 3.14159265358979323846;

// Brute-force lattice transform, the oracle for CorrelationKernel::fourier.
double truncated_fourier(const CorrelationKernel& k, double omega, double phi,
                         int half) {
  double acc = 0.0;
  for (int a = -half; a <= half; ++a)
    for (int b = -half; b <= half; ++b)
      acc += k(a, b) * std::cos(a * omega + b * phi);  // imaginary part cancels
  return acc;
}
}  // namespace

TEST_CASE("logistic gain basics") {
  auto f = GainFunction::logistic();
  CHECK(f(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(3.0) + f(-3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f(100.0) <= 1.0);
  CHECK(f(-100.0) >= 0.0);
  CHECK(f(1.0) > f(0.0));

  auto steep = GainFunction::logistic(4.0);
  CHECK(steep(1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-15));
  CHECK(steep.lipschitz_bound() == doctest::Approx(1.0));
}

TEST_CASE("init laws") {
  auto g = InitLaw::gaussian(2.0, 3.0);
  CHECK(g.mean() == 2.0);
  CHECK(g.variance() == 9.0);
  CHECK(g.from_standard_normal(1.5) == doctest::Approx(2.0 + 4.5).epsilon(1e-15));

  auto pm = InitLaw::point_mass(-1.0);
  CHECK(pm.mean() == -1.0);
  CHECK(pm.variance() == 0.0);
  CHECK(pm.from_standard_normal(3.7) == -1.0);
}

TEST_CASE("dirac kernel collapses to the origin") {
  auto k = CorrelationKernel::dirac(0.25);
  CHECK(k(0, 0) == 0.25);
  CHECK(k(1, 0) == 0.0);
  CHECK(k(0, -2) == 0.0);
  CHECK(k.lambda_sum() == 0.25);
  CHECK(k.lambda_abs_sum() == 0.25);
  CHECK(k.fourier(0.3, -1.1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(k.decay_lag(1e-12) == 0);
}

TEST_CASE("separable geometric kernel closed forms") {
  const double a = 1.0, r1 = 0.5, r2 = 0.5;
  auto k = CorrelationKernel::separable_geometric(a, r1, r2);
  CHECK(k(2, -3) == doctest::Approx(a * std::pow(r1, 2) * std::pow(r2, 3)).epsilon(1e-15));
  CHECK(k(-2, 3) == k(2, -3));  // even under joint negation

  // geometric series: a (1+r)/(1-r) per axis
  CHECK(k.lambda_sum() == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(k.lambda_abs_sum() == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(k.fourier(0.0, 0.0) == doctest::Approx(9.0).epsilon(1e-12));

  // oracle first: direct truncated lattice sum at (pi, pi), tail < 1e-13
  double oracle = truncated_fourier(k, kPi, kPi, 48);
  CHECK(oracle == doctest::Approx(1.0 / 9.0).epsilon(1e-10));  // (1-r)/(1+r) per axis
  CHECK(k.fourier(kPi, kPi) == doctest::Approx(oracle).epsilon(1e-10));

  double omega = 0.7, phi = -1.3;
  CHECK(k.fourier(omega, phi) ==
        doctest::Approx(truncated_fourier(k, omega, phi, 48)).epsilon(1e-10));

  // partial transform at fixed l: geometric factor times the k-sum
  std::complex<double> pk = k.fourier_in_k(omega, 2);
  std::complex<double> direct = 0.0;
  for (int q = -48; q <= 48; ++q)
    direct += k(q, 2) * std::exp(std::complex<double>(0.0, -q * omega));
  CHECK(std::abs(pk - direct) < 1e-10);

  CHECK(k.decay_lag(1e-12) > 0);
  CHECK(k.decay_lag(1e-12) <= 60);
}

TEST_CASE("table kernel") {
  Eigen::MatrixXd vals(3, 3);
  // rows k = -1..1, cols l = -1..1; symmetric under joint negation
  vals << 0.1, 0.2, 0.05,
          0.3, 1.0, 0.3,
          0.05, 0.2, 0.1;
  auto k = CorrelationKernel::table(vals, 1, 1);
  CHECK(k(0, 0) == 1.0);
  CHECK(k(-1, -1) == 0.1);
  CHECK(k(1, 1) == 0.1);
  CHECK(k(-1, 1) == 0.05);
  CHECK(k(2, 0) == 0.0);  // outside the table
  CHECK(k.lambda_sum() == doctest::Approx(vals.sum()).epsilon(1e-15));
  CHECK(k.fourier(0.4, 0.9) ==
        doctest::Approx(truncated_fourier(k, 0.4, 0.9, 2)).epsilon(1e-12));
  CHECK(k.decay_lag(1e-12) <= 1);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.n = 1;
  p.T = 2;
  CHECK(validate_params(p).empty());
  CHECK(p.num_neurons() == 3);

  ModelParams bad = p;
  bad.gamma = 1.2;
  CHECK(!validate_params(bad).empty());

  bad = p;
  bad.sigma = 0.0;
  CHECK(!validate_params(bad).empty());

  bad = p;
  bad.T = 0;
  CHECK(!validate_params(bad).empty());

  bad = p;
  bad.n = -1;
  CHECK(!validate_params(bad).empty());

  bad = p;
  bad.theta_std = -0.5;
  CHECK(!validate_params(bad).empty());
}
