#pragma once

#include <Eigen/Dense>

#include "ldnet/model.hpp"
#include "ldnet/rng.hpp"

namespace ldnet {

// One realisation of the N-neuron system on {0..T}. Row j+n holds neuron j,
// column t holds time t.
struct PathConfiguration {
  int n = 0;
  int T = 0;
  Eigen::MatrixXd values;

  int num_neurons() const { return 2 * n + 1; }
  int row_of(int j) const;              // j in V_n, torus-wrapped
  double at(int j, int t) const { return values(row_of(j), t); }
};

// Eigenvalues of the N^2 x N^2 covariance of the weight grid, indexed by the
// 2-D frequency (p,q), p,q in 0..N-1. Stored clamped at zero.
struct TorusSpectrum {
  int n = 0;
  double mean_offset = 0.0;      // j_bar / N
  Eigen::MatrixXd eigenvalues;   // N x N
  int clamped_count = 0;
  double min_eigenvalue = 0.0;   // before clamping
};

struct WeightMatrix {
  int n = 0;
  Eigen::MatrixXd entries;  // N x N, row = postsynaptic neuron
};

// Spectral decomposition of the torus-restricted weight covariance
// cov(J_ij, J_kl) = Lambda((k-i) mod V_n, (l-j) mod V_n) / N.
// Throws on eigenvalues below -1e-9 * max eigenvalue; clamps smaller dips.
TorusSpectrum build_torus_spectrum(const CorrelationKernel& kernel,
                                   const ModelParams& p);

// Exact draw of the stationary Gaussian weight field via the spectrum.
WeightMatrix sample_weights(const TorusSpectrum& spectrum,
                            const rng::Stream& stream, uint32_t replicate = 0);

// Cross-validation sampler: forms the dense N^2 x N^2 covariance once and
// factors it by symmetric eigendecomposition. Distribution-identical to
// sample_weights but driven by its own draw addresses.
class DenseWeightSampler {
 public:
  DenseWeightSampler(const CorrelationKernel& kernel, const ModelParams& p);
  WeightMatrix sample(const rng::Stream& stream, uint32_t replicate = 0) const;

 private:
  int n_;
  double mean_offset_;
  Eigen::MatrixXd root_;  // covariance square root, N^2 x N^2
};

// Coupled dynamics: u_t^j = gamma u_{t-1}^j + sum_i J_ji f(u_{t-1}^i) + theta^j + B_{t-1}^j
// with theta^j ~ N(theta_bar, theta_std^2) frozen per path.
PathConfiguration simulate_network(const ModelParams& p, const WeightMatrix& weights,
                                   const rng::Stream& stream, uint32_t replicate = 0);

// Reference dynamics: no interaction term, deterministic current theta_bar.
PathConfiguration simulate_reference(const ModelParams& p, const rng::Stream& stream,
                                     uint32_t replicate = 0);

// Innovation coordinates: v_0 = u_0, v_t = u_t - gamma u_{t-1} - theta_bar.
PathConfiguration psi_map(const PathConfiguration& u, const ModelParams& p);
PathConfiguration psi_inverse(const PathConfiguration& v, const ModelParams& p);

// Columns 1..T of a configuration as an N x T matrix.
Eigen::MatrixXd drop_initial_column(const PathConfiguration& u);

}  // namespace ldnet
