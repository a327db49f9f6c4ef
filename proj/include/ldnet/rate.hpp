#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ldnet/empirical.hpp"
#include "ldnet/gaussian_measure.hpp"
#include "ldnet/model.hpp"
#include "ldnet/quadrature.hpp"
#include "ldnet/spectral.hpp"

namespace ldnet {

// Grid-doubling control for the frequency integrals.
struct ConvergenceControl {
  double tol = 1e-8;       // relative change between successive grids
  int initial_grid = 64;
  int max_doublings = 16;
};

// -(1/2N) log det(Id + K/sigma^2), always <= 0.
double gamma1_finite(const SpectralGrid& Kgrid, double sigma);

// -(1/4pi) integral over [0,2pi) of log det(Id + K~(omega)/sigma^2),
// trapezoid with grid doubling. grid_used (optional) reports the final grid.
double gamma1_limit(const LimitSpectralDensity& density, double sigma,
                    const ConvergenceControl& ctrl = {}, int* grid_used = nullptr);

// The quadratic functional behind the second addend, evaluated at a
// configuration in innovation coordinates (v is N x T, columns are t=1..T):
//   (1/2 sigma^2) [ (1/N) sum_{j,k} (v^j-c)^T A^k (v^{j+k}-c)
//                   + (2/N) sum_j <c, v^j> - |c|^2 ].
// Neuron sums are sorted, so the value is exactly shift-invariant.
double phi_n(const MeasureStats& stats, const MatrixKernelSequence& A,
             const Eigen::MatrixXd& v, double sigma);

// Second addend at window n for an empirical or Gaussian measure.
double gamma2_finite(const EmpiricalMeasure& em, const CorrelationKernel& kernel,
                     const ModelParams& p);
double gamma2_finite(const StationaryGaussianMeasure& g,
                     const CorrelationKernel& kernel, const ModelParams& p,
                     const QuadratureSpec& quad = {});

// Limit second addend. The empirical overload takes stats on the model
// window and is exact (atomic sums); the Gaussian overload integrates the
// limit A-transform on a doubling frequency grid.
double gamma2_limit(const MeasureStats& stats, const CorrelationKernel& kernel,
                    const ModelParams& p);
double gamma2_limit(const StationaryGaussianMeasure& g,
                    const CorrelationKernel& kernel, const ModelParams& p,
                    const QuadratureSpec& quad = {},
                    const ConvergenceControl& ctrl = {});

// Uniform lower bound on the quadratic functional:
// T J^2 (sigma^2 + theta_std^2 + sum|Lambda|) / (2 sigma^2 sum Lambda).
// Zero interaction mean gives 0; requires positive correlation mass otherwise.
double beta2_bound(const CorrelationKernel& kernel, const ModelParams& p);

// KL divergence between multivariate Gaussians, +infinity when mu lives on a
// proper subspace. Throws if the reference covariance is singular or either
// covariance is not PSD.
double kl_gaussian(const Eigen::VectorXd& mean_mu, const Eigen::MatrixXd& cov_mu,
                   const Eigen::VectorXd& mean_ref, const Eigen::MatrixXd& cov_ref);

// Per-window relative entropy rate a_n = KL(wrapped window || product
// reference)/N along a schedule of window halves, with Aitken extrapolation.
struct EntropyReport {
  std::vector<int> windows;
  std::vector<double> values;
  double value = 0.0;         // last schedule entry
  double increment = 0.0;     // |last - previous|
  double extrapolated = 0.0;  // Aitken delta-squared of the tail
};
EntropyReport entropy_rate_gaussian(const StationaryGaussianMeasure& g,
                                    const ModelParams& p,
                                    const std::vector<int>& windows);

// H(mu) = I3(mu) - Gamma1(mu) - Gamma2(mu) over the Gaussian test family.
struct HReport {
  EntropyReport entropy;
  double i3 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double value = 0.0;
};
HReport rate_function_H(const StationaryGaussianMeasure& g,
                        const CorrelationKernel& kernel, const ModelParams& p,
                        const std::vector<int>& windows,
                        const QuadratureSpec& quad = {});

// Finite-n and limit addends side by side, plus the quadratic lower bound.
struct GammaReport {
  double gamma1_n = 0.0;
  double gamma2_n = 0.0;
  double gamma_n = 0.0;
  double gamma1_lim = 0.0;
  double gamma2_lim = 0.0;
  double gamma_lim = 0.0;
  double beta2 = 0.0;
  int gamma1_grid = 0;  // frequency grid the limit integral settled on
};
GammaReport gamma_report(const EmpiricalMeasure& em, const CorrelationKernel& kernel,
                         const ModelParams& p);
GammaReport gamma_report(const StationaryGaussianMeasure& g,
                         const CorrelationKernel& kernel, const ModelParams& p,
                         const QuadratureSpec& quad = {});

}  // namespace ldnet
