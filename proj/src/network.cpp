#include "ldnet/network.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ldnet/numeric.hpp"

namespace ldnet {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::complex<double>> twiddle_table(int N) {
  std::vector<std::complex<double>> w(N);
  for (int m = 0; m < N; ++m)
    w[m] = std::exp(std::complex<double>(0.0, -kTwoPi * m / N));
  return w;
}

// table index of e^{-i 2 pi a b / N}
inline int twiddle_index(int a, int b, int N) {
  int e = (a * b) % N;
  if (e < 0) e += N;
  return e;
}
}  // namespace

int PathConfiguration::row_of(int j) const {
  return mod_window(j, n) + n;
}

TorusSpectrum build_torus_spectrum(const CorrelationKernel& kernel,
                                   const ModelParams& p) {
  const int N = p.num_neurons();
  auto w = twiddle_table(N);

  // two-pass DFT: first over k, then over l
  Eigen::MatrixXcd partial(N, N);  // (p, l+n)
  for (int fp = 0; fp < N; ++fp)
    for (int l = -p.n; l <= p.n; ++l) {
      std::complex<double> s = 0.0;
      for (int k = -p.n; k <= p.n; ++k)
        s += kernel(k, l) * w[twiddle_index(fp, k, N)];
      partial(fp, l + p.n) = s;
    }

  TorusSpectrum out;
  out.n = p.n;
  out.mean_offset = p.j_bar / N;
  out.eigenvalues.resize(N, N);
  double max_imag = 0.0;
  for (int fp = 0; fp < N; ++fp)
    for (int fq = 0; fq < N; ++fq) {
      std::complex<double> s = 0.0;
      for (int l = -p.n; l <= p.n; ++l)
        s += partial(fp, l + p.n) * w[twiddle_index(fq, l, N)];
      max_imag = std::max(max_imag, std::abs(s.imag()));
      out.eigenvalues(fp, fq) = s.real() / N;
    }

  double lmax = out.eigenvalues.maxCoeff();
  double tol = 1e-9 * std::max(lmax, 0.0);
  out.min_eigenvalue = out.eigenvalues.minCoeff();
  if (out.min_eigenvalue < -tol)
    throw std::runtime_error(
        "weight kernel is not positive semidefinite on the torus (min eigenvalue " +
        std::to_string(out.min_eigenvalue) + ")");
  if (max_imag > 1e-9 * std::max(1.0, lmax))
    throw std::runtime_error("torus spectrum came out non-real; kernel symmetry is broken");
  for (int fp = 0; fp < N; ++fp)
    for (int fq = 0; fq < N; ++fq)
      if (out.eigenvalues(fp, fq) < 0.0) {
        out.eigenvalues(fp, fq) = 0.0;
        ++out.clamped_count;
      }
  return out;
}

WeightMatrix sample_weights(const TorusSpectrum& spectrum,
                            const rng::Stream& stream, uint32_t replicate) {
  const int N = 2 * spectrum.n + 1;
  auto w = twiddle_table(N);

  // Complex white noise per frequency cell, scaled by sqrt eigenvalue. The
  // real part of the inverse transform (1/N normalisation) has exactly the
  // target covariance; no Hermitian pairing is needed at that normalisation.
  Eigen::MatrixXcd zhat(N, N);
  for (int fp = 0; fp < N; ++fp)
    for (int fq = 0; fq < N; ++fq) {
      auto [a, b] = stream.normal_pair(rng::Draw::weight_spectral, replicate,
                                       uint32_t(fp * N + fq));
      double s = std::sqrt(spectrum.eigenvalues(fp, fq));
      zhat(fp, fq) = std::complex<double>(s * a, s * b);
    }

  // inverse transform, two passes; conj(w) gives e^{+i...}
  Eigen::MatrixXcd half(N, N);  // (fp, col)
  for (int fp = 0; fp < N; ++fp)
    for (int col = 0; col < N; ++col) {
      std::complex<double> s = 0.0;
      for (int fq = 0; fq < N; ++fq)
        s += zhat(fp, fq) * std::conj(w[twiddle_index(fq, col, N)]);
      half(fp, col) = s;
    }

  WeightMatrix out;
  out.n = spectrum.n;
  out.entries.resize(N, N);
  for (int row = 0; row < N; ++row)
    for (int col = 0; col < N; ++col) {
      std::complex<double> s = 0.0;
      for (int fp = 0; fp < N; ++fp)
        s += half(fp, col) * std::conj(w[twiddle_index(fp, row, N)]);
      out.entries(row, col) = spectrum.mean_offset + s.real() / N;
    }
  return out;
}

DenseWeightSampler::DenseWeightSampler(const CorrelationKernel& kernel,
                                       const ModelParams& p)
    : n_(p.n), mean_offset_(p.j_bar / p.num_neurons()) {
  const int N = p.num_neurons();
  const int cells = N * N;
  Eigen::MatrixXd cov(cells, cells);
  for (int r = 0; r < N; ++r)
    for (int s = 0; s < N; ++s)
      for (int r2 = 0; r2 < N; ++r2)
        for (int s2 = 0; s2 < N; ++s2) {
          int dk = mod_window(r2 - r, p.n);
          int dl = mod_window(s2 - s, p.n);
          cov(r * N + s, r2 * N + s2) = kernel(dk, dl) / N;
        }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  root_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
}

WeightMatrix DenseWeightSampler::sample(const rng::Stream& stream,
                                        uint32_t replicate) const {
  const int N = 2 * n_ + 1;
  Eigen::VectorXd z(N * N);
  for (int i = 0; i < N * N; ++i)
    z(i) = stream.normal(rng::Draw::weight_dense, replicate, uint32_t(i));
  Eigen::VectorXd x = root_ * z;
  WeightMatrix out;
  out.n = n_;
  out.entries.resize(N, N);
  for (int r = 0; r < N; ++r)
    for (int s = 0; s < N; ++s) out.entries(r, s) = mean_offset_ + x(r * N + s);
  return out;
}

PathConfiguration simulate_network(const ModelParams& p, const WeightMatrix& weights,
                                   const rng::Stream& stream, uint32_t replicate) {
  const int N = p.num_neurons();
  if (weights.n != p.n) throw std::invalid_argument("weight matrix size mismatch");
  PathConfiguration u;
  u.n = p.n;
  u.T = p.T;
  u.values.resize(N, p.T + 1);

  Eigen::VectorXd theta(N);
  for (int r = 0; r < N; ++r) {
    u.values(r, 0) = p.init_law.from_standard_normal(
        stream.normal(rng::Draw::init_state, replicate, uint32_t(r)));
    theta(r) = p.theta_bar +
               p.theta_std * stream.normal(rng::Draw::theta, replicate, uint32_t(r));
  }

  Eigen::VectorXd fired(N);
  for (int t = 1; t <= p.T; ++t) {
    for (int r = 0; r < N; ++r) fired(r) = p.gain(u.values(r, t - 1));
    Eigen::VectorXd drive = weights.entries * fired;
    for (int r = 0; r < N; ++r) {
      double noise = p.sigma * stream.normal(rng::Draw::step_noise, replicate,
                                             uint32_t(r), uint32_t(t - 1));
      u.values(r, t) = p.gamma * u.values(r, t - 1) + drive(r) + theta(r) + noise;
    }
  }
  return u;
}

PathConfiguration simulate_reference(const ModelParams& p, const rng::Stream& stream,
                                     uint32_t replicate) {
  const int N = p.num_neurons();
  PathConfiguration u;
  u.n = p.n;
  u.T = p.T;
  u.values.resize(N, p.T + 1);
  for (int r = 0; r < N; ++r)
    u.values(r, 0) = p.init_law.from_standard_normal(
        stream.normal(rng::Draw::init_state, replicate, uint32_t(r)));
  for (int t = 1; t <= p.T; ++t)
    for (int r = 0; r < N; ++r) {
      double noise = p.sigma * stream.normal(rng::Draw::step_noise, replicate,
                                             uint32_t(r), uint32_t(t - 1));
      u.values(r, t) = p.gamma * u.values(r, t - 1) + p.theta_bar + noise;
    }
  return u;
}

PathConfiguration psi_map(const PathConfiguration& u, const ModelParams& p) {
  PathConfiguration v = u;
  for (int t = u.T; t >= 1; --t)
    v.values.col(t) = u.values.col(t) - p.gamma * u.values.col(t - 1) -
                      Eigen::VectorXd::Constant(u.num_neurons(), p.theta_bar);
  return v;
}

PathConfiguration psi_inverse(const PathConfiguration& v, const ModelParams& p) {
  PathConfiguration u = v;
  for (int t = 1; t <= v.T; ++t)
    u.values.col(t) = v.values.col(t) + p.gamma * u.values.col(t - 1) +
                      Eigen::VectorXd::Constant(v.num_neurons(), p.theta_bar);
  return u;
}

Eigen::MatrixXd drop_initial_column(const PathConfiguration& u) {
  return u.values.rightCols(u.T);
}

}  // namespace ldnet
