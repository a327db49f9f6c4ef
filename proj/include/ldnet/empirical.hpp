#pragma once

#include <Eigen/Dense>

#include "ldnet/gaussian_measure.hpp"
#include "ldnet/model.hpp"
#include "ldnet/network.hpp"
#include "ldnet/quadrature.hpp"
#include "ldnet/spectral.hpp"

namespace ldnet {

// Cyclic index shift: row j of the result is row j+m of the input (wrapped).
PathConfiguration shift(const PathConfiguration& u, int m);

// The empirical measure (1/N) sum_j delta_{shift_j(u)}, represented by the
// configuration itself.
struct EmpiricalMeasure {
  PathConfiguration config;
};

enum class StatsSource { empirical, analytic };

// Everything the spectral and rate layers need to know about a measure:
// gain means, interaction means c, gain cross-moments M^k, and the first two
// moments of the transformed coordinates v.
struct MeasureStats {
  StatsSource source = StatsSource::empirical;
  int T = 0;
  double j_bar = 0.0;
  Eigen::VectorXd f_mean;       // E f(u_{t-1}), t = 1..T
  Eigen::VectorXd c;            // j_bar * f_mean
  MatrixKernelSequence M;       // M^k_{st} = E f(u^0_{s-1}) f(u^k_{t-1})
  Eigen::VectorXd v_mean;       // E v_t, t = 1..T
  MatrixKernelSequence v_second;  // E v^0_s v^k_t

  int half() const { return M.half(); }
};

// Moments under the empirical measure of a configuration. Sums over neurons
// are accumulated in sorted order, which makes every statistic exactly
// invariant under cyclic shifts of the configuration.
MeasureStats stats_of_empirical(const EmpiricalMeasure& em, const ModelParams& p);

// Moments under a stationary Gaussian path law, with the gain expectations
// evaluated by Gauss-Hermite quadrature. Blocks at negative lags mirror the
// positive ones, so the transpose symmetry holds by construction.
MeasureStats stats_of_gaussian(const StationaryGaussianMeasure& g,
                               const ModelParams& p, int lag_count,
                               const QuadratureSpec& quad = {});

// Keep only lags |k| <= new_half.
MeasureStats restrict_stats(const MeasureStats& stats, int new_half);

}  // namespace ldnet
