#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ldnet/model.hpp"

namespace ldnet {

struct MeasureStats;

// Lag-indexed family of square blocks B^k, k in {-half..half}, with
// B^{-k} = transpose(B^k). Also read as one period of a torus sequence.
class MatrixKernelSequence {
 public:
  MatrixKernelSequence() = default;
  MatrixKernelSequence(int half, int dim)
      : half_(half), dim_(dim),
        blocks_(2 * half + 1, Eigen::MatrixXd::Zero(dim, dim)) {}

  int half() const { return half_; }
  int period() const { return 2 * half_ + 1; }
  int dim() const { return dim_; }

  const Eigen::MatrixXd& block(int k) const { return blocks_.at(k + half_); }
  Eigen::MatrixXd& block(int k) { return blocks_.at(k + half_); }
  const Eigen::MatrixXd& block_mod(int k) const;  // torus wrap

  MatrixKernelSequence restricted(int new_half) const;

 private:
  int half_ = 0;
  int dim_ = 0;
  std::vector<Eigen::MatrixXd> blocks_;
};

// Hermitian blocks on the exact torus frequencies omega_m = 2 pi m / period.
class SpectralGrid {
 public:
  SpectralGrid() = default;
  SpectralGrid(int half, int dim)
      : half_(half), dim_(dim),
        values_(2 * half + 1, Eigen::MatrixXcd::Zero(dim, dim)) {}

  int half() const { return half_; }
  int period() const { return 2 * half_ + 1; }
  int dim() const { return dim_; }
  double omega(int m) const;

  const Eigen::MatrixXcd& value(int m) const { return values_.at(m + half_); }
  Eigen::MatrixXcd& value(int m) { return values_.at(m + half_); }

 private:
  int half_ = 0;
  int dim_ = 0;
  std::vector<Eigen::MatrixXcd> values_;
};

// Interaction covariance sequence on the window:
// K^k = theta_std^2 [k=0] ones + sum_{l in V_n} Lambda(k,l) M^l.
MatrixKernelSequence build_K_sequence(const MeasureStats& stats,
                                      const CorrelationKernel& kernel,
                                      const ModelParams& p);

// Forward transform at the torus frequencies: sum_k B^k e^{-ik omega_m}.
SpectralGrid dft_sequence(const MatrixKernelSequence& seq);

// Per-frequency A_m = K_m (sigma^2 Id + K_m)^{-1}, via the eigensystem of
// K_m so the result is Hermitian PSD with eigenvalues in [0,1) by
// construction. Throws if K_m has an eigenvalue below -1e-10 * (trace/dim).
SpectralGrid build_A_grid(const SpectralGrid& Kgrid, double sigma);

// Inverse transform A^k = (1/N) sum_m A_m e^{+ik omega_m}; the imaginary
// residual must stay below 1e-9 or the grid was not conjugate-symmetric.
MatrixKernelSequence a_coefficients(const SpectralGrid& Agrid);

// Single-block versions of the two transforms above, for densities that are
// evaluated frequency by frequency rather than stored on a grid.
Eigen::MatrixXcd psd_a_transform(const Eigen::MatrixXcd& block, double sigma);
double psd_logdet_ratio(const Eigen::MatrixXcd& block, double sigma);

// log det(Id_{NT} + C/sigma^2) for the block circulant C assembled from the
// sequence behind Kgrid, computed as sum_m log det(Id + K_m/sigma^2).
double block_circulant_logdet(const SpectralGrid& Kgrid, double sigma);

// Dense assembly, block (i,j) = B^{(j-i) mod V_n}. Oracle-sized inputs only.
Eigen::MatrixXd assemble_block_circulant(const MatrixKernelSequence& seq);

// Limit interaction spectral density K~(omega), evaluable at any frequency.
// Empirical stats: exact atomic form theta^2 ones + (1/N) sum_m
// Lambda~(omega, -omega_m) Mhat_m. Analytic stats: lag-split form using the
// factorised tail M^l -> f_mean f_mean^T beyond the correlation support.
class LimitSpectralDensity {
 public:
  LimitSpectralDensity(const MeasureStats& stats, const CorrelationKernel& kernel,
                       const ModelParams& p);
  Eigen::MatrixXcd value(double omega) const;
  int dim() const { return T_; }

 private:
  int T_ = 0;
  double theta_sq_ = 0.0;
  bool empirical_ = true;
  CorrelationKernel kernel_ = CorrelationKernel::dirac(0.0);
  // empirical route
  std::vector<Eigen::MatrixXcd> mhat_;
  std::vector<double> atom_omega_;
  // analytic route
  Eigen::MatrixXd m_inf_;
  std::vector<Eigen::MatrixXd> fluct_;  // M^l - M_inf, index l + L
  int L_ = 0;
};

// The density sampled on a uniform odd-sized grid (frequencies 2 pi m / G).
SpectralGrid limit_spectral_density(const MeasureStats& stats,
                                    const CorrelationKernel& kernel,
                                    const ModelParams& p, int grid_size);

}  // namespace ldnet
