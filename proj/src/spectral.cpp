#include "ldnet/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ldnet/empirical.hpp"
#include "ldnet/numeric.hpp"

namespace ldnet {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::complex<double>> twiddle_table(int period, double sign) {
  std::vector<std::complex<double>> tw(period);
  for (int r = 0; r < period; ++r)
    tw[r] = std::polar(1.0, sign * kTwoPi * r / period);
  return tw;
}

int twiddle_index(int k, int m, int period) {
  long long r = (static_cast<long long>(k) * m) % period;
  if (r < 0) r += period;
  return static_cast<int>(r);
}

// Eigenvalues (clamped at zero) and vectors of a nearly Hermitian block.
// Rejects eigenvalues below -1e-10 * (trace / dim).
void psd_eigensystem(const Eigen::MatrixXcd& raw, Eigen::VectorXd& lambda,
                     Eigen::MatrixXcd& vectors, const char* what) {
  Eigen::MatrixXcd H = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + ": eigensolver failed");
  double tol = 1e-10 * std::max(H.trace().real() / H.rows(), 0.0);
  lambda = es.eigenvalues();
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol)
      throw std::runtime_error(std::string(what) +
                               ": block has a negative eigenvalue");
    if (lambda(i) < 0.0) lambda(i) = 0.0;
  }
  vectors = es.eigenvectors();
}

}  // namespace

const Eigen::MatrixXd& MatrixKernelSequence::block_mod(int k) const {
  return blocks_.at(mod_window(k, half_) + half_);
}

MatrixKernelSequence MatrixKernelSequence::restricted(int new_half) const {
  if (new_half < 0 || new_half > half_)
    throw std::invalid_argument("restricted: bad half width");
  MatrixKernelSequence out(new_half, dim_);
  for (int k = -new_half; k <= new_half; ++k) out.block(k) = block(k);
  return out;
}

double SpectralGrid::omega(int m) const { return kTwoPi * m / period(); }

MatrixKernelSequence build_K_sequence(const MeasureStats& stats,
                                      const CorrelationKernel& kernel,
                                      const ModelParams& p) {
  if (p.T > 16)
    throw std::invalid_argument("build_K_sequence: T beyond desk scale (max 16)");
  if (stats.T != p.T)
    throw std::invalid_argument("build_K_sequence: stats horizon mismatch");
  if (stats.half() < p.n)
    throw std::invalid_argument("build_K_sequence: stats lack lags for the window");
  const int T = p.T;
  const double th2 = p.theta_std * p.theta_std;

  MatrixKernelSequence K(p.n, T);
  for (int k = -p.n; k <= p.n; ++k) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(T, T);
    if (k == 0 && th2 > 0.0) B.array() += th2;
    for (int l = -p.n; l <= p.n; ++l) {
      double lam = kernel(k, l);
      if (lam != 0.0) B += lam * stats.M.block(l);
    }
    K.block(k) = B;
  }
  return K;
}

SpectralGrid dft_sequence(const MatrixKernelSequence& seq) {
  const int P = seq.period();
  const int half = seq.half();
  auto tw = twiddle_table(P, -1.0);
  SpectralGrid grid(half, seq.dim());
  for (int m = -half; m <= half; ++m) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(seq.dim(), seq.dim());
    for (int k = -half; k <= half; ++k)
      acc += tw[twiddle_index(k, m, P)] * seq.block(k);
    grid.value(m) = acc;
  }
  return grid;
}

Eigen::MatrixXcd psd_a_transform(const Eigen::MatrixXcd& block, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double s2 = sigma * sigma;
  Eigen::VectorXd lambda;
  Eigen::MatrixXcd U;
  psd_eigensystem(block, lambda, U, "psd_a_transform");
  Eigen::VectorXd a(lambda.size());
  for (int i = 0; i < lambda.size(); ++i) a(i) = lambda(i) / (s2 + lambda(i));
  return U * a.asDiagonal() * U.adjoint();
}

double psd_logdet_ratio(const Eigen::MatrixXcd& block, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double s2 = sigma * sigma;
  Eigen::VectorXd lambda;
  Eigen::MatrixXcd U;
  psd_eigensystem(block, lambda, U, "psd_logdet_ratio");
  double total = 0.0;
  for (int i = 0; i < lambda.size(); ++i) total += std::log1p(lambda(i) / s2);
  return total;
}

SpectralGrid build_A_grid(const SpectralGrid& Kgrid, double sigma) {
  SpectralGrid out(Kgrid.half(), Kgrid.dim());
  for (int m = -Kgrid.half(); m <= Kgrid.half(); ++m)
    out.value(m) = psd_a_transform(Kgrid.value(m), sigma);
  return out;
}

MatrixKernelSequence a_coefficients(const SpectralGrid& Agrid) {
  const int P = Agrid.period();
  const int half = Agrid.half();
  auto tw = twiddle_table(P, +1.0);
  MatrixKernelSequence out(half, Agrid.dim());
  double max_imag = 0.0, max_real = 1.0;
  for (int k = -half; k <= half; ++k) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(Agrid.dim(), Agrid.dim());
    for (int m = -half; m <= half; ++m)
      acc += tw[twiddle_index(k, m, P)] * Agrid.value(m);
    acc /= P;
    max_imag = std::max(max_imag, acc.imag().cwiseAbs().maxCoeff());
    max_real = std::max(max_real, acc.real().cwiseAbs().maxCoeff());
    out.block(k) = acc.real();
  }
  if (max_imag > 1e-9 * max_real)
    throw std::runtime_error(
        "a_coefficients: imaginary residual too large; grid not conjugate-symmetric");
  return out;
}

double block_circulant_logdet(const SpectralGrid& Kgrid, double sigma) {
  double total = 0.0;
  for (int m = -Kgrid.half(); m <= Kgrid.half(); ++m)
    total += psd_logdet_ratio(Kgrid.value(m), sigma);
  return total;
}

Eigen::MatrixXd assemble_block_circulant(const MatrixKernelSequence& seq) {
  const int N = seq.period();
  const int d = seq.dim();
  Eigen::MatrixXd out(N * d, N * d);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      out.block(i * d, j * d, d, d) = seq.block_mod(j - i);
  return out;
}

LimitSpectralDensity::LimitSpectralDensity(const MeasureStats& stats,
                                           const CorrelationKernel& kernel,
                                           const ModelParams& p)
    : T_(stats.T),
      theta_sq_(p.theta_std * p.theta_std),
      empirical_(stats.source == StatsSource::empirical),
      kernel_(kernel) {
  if (empirical_) {
    if (stats.half() != p.n)
      throw std::invalid_argument(
          "limit density: empirical stats must live on the model window");
    SpectralGrid mg = dft_sequence(stats.M);
    for (int m = -mg.half(); m <= mg.half(); ++m) {
      mhat_.push_back(mg.value(m));
      atom_omega_.push_back(mg.omega(m));
    }
  } else {
    L_ = stats.half();
    m_inf_ = stats.f_mean * stats.f_mean.transpose();
    for (int l = -L_; l <= L_; ++l) fluct_.push_back(stats.M.block(l) - m_inf_);
  }
}

Eigen::MatrixXcd LimitSpectralDensity::value(double omega) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Constant(T_, T_, theta_sq_);
  if (empirical_) {
    const double N = static_cast<double>(mhat_.size());
    for (std::size_t i = 0; i < mhat_.size(); ++i)
      out += (kernel_.fourier(omega, -atom_omega_[i]) / N) * mhat_[i];
  } else {
    out += kernel_.fourier(omega, 0.0) * m_inf_.cast<std::complex<double>>();
    for (int l = -L_; l <= L_; ++l)
      out += kernel_.fourier_in_k(omega, l) *
             fluct_[l + L_].cast<std::complex<double>>();
  }
  return out;
}

SpectralGrid limit_spectral_density(const MeasureStats& stats,
                                    const CorrelationKernel& kernel,
                                    const ModelParams& p, int grid_size) {
  if (grid_size < 1 || grid_size % 2 == 0)
    throw std::invalid_argument("grid_size must be odd and positive");
  LimitSpectralDensity density(stats, kernel, p);
  SpectralGrid out((grid_size - 1) / 2, stats.T);
  for (int m = -out.half(); m <= out.half(); ++m)
    out.value(m) = density.value(out.omega(m));
  return out;
}

}  // namespace ldnet
