#include "ldnet/gaussian_measure.hpp"

#include <cmath>
#include <stdexcept>

#include "ldnet/numeric.hpp"

namespace ldnet {

Eigen::MatrixXd StationaryGaussianMeasure::autocov_at(int k) const {
  int a = std::abs(k);
  if (a > support())
    return Eigen::MatrixXd::Zero(mean.size(), mean.size());
  return k >= 0 ? autocov[a] : Eigen::MatrixXd(autocov[a].transpose());
}

StationaryGaussianMeasure reference_gaussian_law(const ModelParams& p) {
  const int d = p.T + 1;
  StationaryGaussianMeasure g;
  g.mean.resize(d);
  g.mean(0) = p.init_law.mean();
  for (int t = 1; t <= p.T; ++t) g.mean(t) = p.gamma * g.mean(t - 1) + p.theta_bar;

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  c(0, 0) = p.init_law.variance();
  for (int t = 1; t <= p.T; ++t) {
    c(t, t) = p.gamma * p.gamma * c(t - 1, t - 1) + p.sigma * p.sigma;
    for (int s = 0; s < t; ++s) {
      c(s, t) = p.gamma * c(s, t - 1);
      c(t, s) = c(s, t);
    }
  }
  g.autocov.push_back(c);
  return g;
}

StationaryGaussianMeasure shifted_reference_law(const ModelParams& p, double delta) {
  StationaryGaussianMeasure g = reference_gaussian_law(p);
  double bump = delta;
  for (int t = 0; t <= p.T; ++t) {
    g.mean(t) += bump;
    bump *= p.gamma;
  }
  return g;
}

StationaryGaussianMeasure separable_gaussian_measure(const Eigen::VectorXd& mean,
                                                     const Eigen::MatrixXd& time_cov,
                                                     double cross_rho, int support,
                                                     bool bartlett_taper) {
  if (time_cov.rows() != time_cov.cols() || time_cov.rows() != mean.size())
    throw std::invalid_argument("separable measure: shape mismatch");
  if (!(std::abs(cross_rho) < 1.0))
    throw std::invalid_argument("separable measure: |cross_rho| must be < 1");
  if (support < 0) throw std::invalid_argument("separable measure: support < 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(time_cov);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw std::invalid_argument("separable measure: time covariance not PSD");

  StationaryGaussianMeasure g;
  g.mean = mean;
  for (int k = 0; k <= support; ++k) {
    double s = std::pow(cross_rho, k);
    if (bartlett_taper) s *= 1.0 - double(k) / (support + 1);
    g.autocov.push_back(s * time_cov);
  }
  return g;
}

std::vector<Eigen::MatrixXd> wrapped_autocov(const StationaryGaussianMeasure& g, int n) {
  const int N = 2 * n + 1;
  const int d = g.horizon() + 1;
  std::vector<Eigen::MatrixXd> wrapped(N, Eigen::MatrixXd::Zero(d, d));
  int L = g.support();
  for (int k = -n; k <= n; ++k)
    for (int m = -L; m <= L; ++m)
      if ((m - k) % N == 0) wrapped[k + n] += g.autocov_at(m);
  return wrapped;
}

WrappedWindow wrapped_window(const StationaryGaussianMeasure& g, int n) {
  const int N = 2 * n + 1;
  const int d = g.horizon() + 1;
  auto blocks = wrapped_autocov(g, n);
  WrappedWindow w;
  w.mean.resize(N * d);
  for (int i = 0; i < N; ++i) w.mean.segment(i * d, d) = g.mean;
  w.cov.resize(N * d, N * d);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      int k = mod_window(j - i, n);
      w.cov.block(i * d, j * d, d, d) = blocks[k + n];
    }
  return w;
}

WindowSampler::WindowSampler(const StationaryGaussianMeasure& g, int n)
    : n_(n), T_(g.horizon()) {
  WrappedWindow w = wrapped_window(g, n);
  mean_ = w.mean;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.cov);
  double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (es.eigenvalues().minCoeff() < -1e-9 * std::max(lmax, 1e-300))
    throw std::runtime_error("wrapped window covariance not PSD");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  root_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
}

PathConfiguration WindowSampler::sample(const rng::Stream& stream,
                                        uint32_t replicate) const {
  const int N = 2 * n_ + 1;
  const int d = T_ + 1;
  Eigen::VectorXd z(N * d);
  for (int i = 0; i < N * d; ++i)
    z(i) = stream.normal(rng::Draw::gaussian_window, replicate, uint32_t(i));
  Eigen::VectorXd x = mean_ + root_ * z;
  PathConfiguration u;
  u.n = n_;
  u.T = T_;
  u.values.resize(N, d);
  for (int i = 0; i < N; ++i) u.values.row(i) = x.segment(i * d, d).transpose();
  return u;
}

}  // namespace ldnet
