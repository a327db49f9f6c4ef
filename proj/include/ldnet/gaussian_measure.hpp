#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ldnet/model.hpp"
#include "ldnet/network.hpp"
#include "ldnet/rng.hpp"

namespace ldnet {

// Neuron-stationary Gaussian path law: every neuron shares `mean` over
// {0..T}; cross-covariances cov(u^0_s, u^k_t) = autocov[k](s,t) vanish for
// |k| beyond the stored support, and C^{-k} = transpose(C^k).
struct StationaryGaussianMeasure {
  Eigen::VectorXd mean;                  // length T+1
  std::vector<Eigen::MatrixXd> autocov;  // C^k for k = 0..L

  int horizon() const { return int(mean.size()) - 1; }
  int support() const { return int(autocov.size()) - 1; }
  Eigen::MatrixXd autocov_at(int k) const;
};

// Law of the uncoupled reference process Y (columns independent).
StationaryGaussianMeasure reference_gaussian_law(const ModelParams& p);

// Same law with the start shifted by delta (the shift propagates as
// gamma^t along the path; in innovation coordinates only v_0 moves).
StationaryGaussianMeasure shifted_reference_law(const ModelParams& p, double delta);

// Test family: C^k = scalar(k) * time_cov with scalar(k) = rho^|k|, cut at
// `support` and optionally Bartlett-tapered so the cut kernel stays PSD.
StationaryGaussianMeasure separable_gaussian_measure(const Eigen::VectorXd& mean,
                                                     const Eigen::MatrixXd& time_cov,
                                                     double cross_rho, int support,
                                                     bool bartlett_taper = true);

// Circulant wrap of g over the window V_n: block k is the alias sum
// sum_r C^{k+rN}. Blocks are (T+1)x(T+1), lags in V_n.
std::vector<Eigen::MatrixXd> wrapped_autocov(const StationaryGaussianMeasure& g, int n);

struct WrappedWindow {
  Eigen::VectorXd mean;  // N(T+1)
  Eigen::MatrixXd cov;   // N(T+1) x N(T+1), block-circulant
};
WrappedWindow wrapped_window(const StationaryGaussianMeasure& g, int n);

// Draws N-neuron configurations from the wrapped window (dense square-root
// factorisation, done once at construction).
class WindowSampler {
 public:
  WindowSampler(const StationaryGaussianMeasure& g, int n);
  PathConfiguration sample(const rng::Stream& stream, uint32_t replicate = 0) const;

 private:
  int n_;
  int T_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd root_;
};

}  // namespace ldnet
