#pragma once

#include <cstdint>

#include "ldnet/model.hpp"
#include "ldnet/network.hpp"
#include "ldnet/rng.hpp"

namespace ldnet {

// Log of the sample mean of exponentials, with a delta-method standard error.
struct McEstimate {
  double log_mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
  double max_abs_exponent = 0.0;
};

// Estimates the density ratio at a fixed configuration by averaging
// exp((1/sigma^2) sum_j [<v^j, G^j> - |G^j|^2/2]) over weight draws, where
// G^i_t = sum_j J_ij f(u^j_{t-1}) plus the frozen per-neuron current
// fluctuation. Max-shifted summation keeps everything in range.
McEstimate rn_mc_estimate(const PathConfiguration& u, const CorrelationKernel& kernel,
                          const ModelParams& p, int samples,
                          const rng::Stream& stream, int threads = 1);

// Closed form for the same log-ratio: N * (Gamma1 + Gamma2) at the
// empirical measure of u.
double rn_analytic(const PathConfiguration& u, const CorrelationKernel& kernel,
                   const ModelParams& p);

struct RnReport {
  double mc_log = 0.0;
  double mc_se = 0.0;
  double analytic = 0.0;
  double z = 0.0;
  bool unreliable = false;  // exponents beyond the warn threshold
  int samples = 0;
};
RnReport rn_check(const PathConfiguration& u, const CorrelationKernel& kernel,
                  const ModelParams& p, int samples, const rng::Stream& stream,
                  int threads = 1, double warn_nats = 50.0);

// Small closed library of bounded statistics of a configuration.
struct PathFunctional {
  enum class Kind { one, mean_gain, lag_gain_correlation, half_space_c };
  Kind kind = Kind::one;
  int t = 0;               // time argument
  int s = 0;               // first time (lag_gain_correlation)
  int k = 0;               // neuron lag (lag_gain_correlation)
  double threshold = 0.0;  // half_space_c: indicator of c_t >= threshold

  double evaluate(const PathConfiguration& u, const ModelParams& p) const;
};

// Two-ensemble comparison: reweighted reference paths against the coupled
// network (draw weights, then the path given the weights).
struct PushforwardReport {
  double lhs = 0.0;  // E_ref[F * exp(N Gamma)]
  double lhs_se = 0.0;
  double rhs = 0.0;  // E_coupled[F]
  double rhs_se = 0.0;
  double z = 0.0;
  bool unreliable = false;
  int samples = 0;
};
PushforwardReport pushforward_check(const PathFunctional& f,
                                    const CorrelationKernel& kernel,
                                    const ModelParams& p, int samples,
                                    const rng::Stream& stream, int threads = 1,
                                    double warn_nats = 50.0);

}  // namespace ldnet
