#include "ldnet/rate.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldnet/numeric.hpp"

namespace ldnet {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInf = std::numeric_limits<double>::infinity();

double contraction(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

// E[(v^0 - c)(v^k - c)^T] from raw second moments.
Eigen::MatrixXd centered_block(const MeasureStats& s, int k) {
  return s.v_second.block(k) - s.c * s.v_mean.transpose() -
         s.v_mean * s.c.transpose() + s.c * s.c.transpose();
}

// Finite-window A-coefficients for a measure's interaction covariance.
MatrixKernelSequence finite_a_sequence(const MeasureStats& stats,
                                       const CorrelationKernel& kernel,
                                       const ModelParams& p, SpectralGrid* Kgrid_out) {
  SpectralGrid Kgrid = dft_sequence(build_K_sequence(stats, kernel, p));
  MatrixKernelSequence A = a_coefficients(build_A_grid(Kgrid, p.sigma));
  if (Kgrid_out) *Kgrid_out = std::move(Kgrid);
  return A;
}

double aitken_tail(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double x2 = xs.back();
  if (xs.size() < 3 || !std::isfinite(x2)) return x2;
  double x0 = xs[xs.size() - 3], x1 = xs[xs.size() - 2];
  if (!std::isfinite(x0) || !std::isfinite(x1)) return x2;
  double den = x2 - 2.0 * x1 + x0;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(x2))) return x2;
  return x2 - (x2 - x1) * (x2 - x1) / den;
}

}  // namespace

double gamma1_finite(const SpectralGrid& Kgrid, double sigma) {
  return -block_circulant_logdet(Kgrid, sigma) / (2.0 * Kgrid.period());
}

double gamma1_limit(const LimitSpectralDensity& density, double sigma,
                    const ConvergenceControl& ctrl, int* grid_used) {
  int G = std::max(ctrl.initial_grid, 4);
  double prev = 0.0;
  for (int it = 0; it <= ctrl.max_doublings; ++it) {
    double acc = 0.0;
    for (int g = 0; g < G; ++g)
      acc += psd_logdet_ratio(density.value(kTwoPi * g / G), sigma);
    double val = -acc / (2.0 * G);
    if (it > 0 && std::abs(val - prev) <= ctrl.tol * std::max(1.0, std::abs(val))) {
      if (grid_used) *grid_used = G;
      return val;
    }
    prev = val;
    G *= 2;
  }
  throw std::runtime_error("gamma1_limit: frequency grid did not converge");
}

double phi_n(const MeasureStats& stats, const MatrixKernelSequence& A,
             const Eigen::MatrixXd& v, double sigma) {
  const int N = A.period();
  const int T = static_cast<int>(v.cols());
  if (v.rows() != N)
    throw std::invalid_argument("phi_n: configuration size does not match window");
  if (A.dim() != T || stats.T != T)
    throw std::invalid_argument("phi_n: horizon mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");

  const Eigen::VectorXd& c = stats.c;
  Eigen::MatrixXd W = v.rowwise() - c.transpose();

  std::vector<double> terms(N);
  double quad = 0.0;
  for (int k = -A.half(); k <= A.half(); ++k) {
    Eigen::MatrixXd P = W * A.block(k);
    for (int j = 0; j < N; ++j) {
      int jk = (j + k) % N;
      if (jk < 0) jk += N;
      terms[j] = P.row(j).dot(W.row(jk));
    }
    quad += permutation_invariant_sum(terms);
  }
  for (int j = 0; j < N; ++j) terms[j] = v.row(j).dot(c);
  double linear = permutation_invariant_sum(terms);

  return (quad / N + 2.0 * linear / N - c.dot(c)) / (2.0 * sigma * sigma);
}

double gamma2_finite(const EmpiricalMeasure& em, const CorrelationKernel& kernel,
                     const ModelParams& p) {
  MeasureStats stats = stats_of_empirical(em, p);
  MatrixKernelSequence A = finite_a_sequence(stats, kernel, p, nullptr);
  Eigen::MatrixXd v = drop_initial_column(psi_map(em.config, p));
  return phi_n(stats, A, v, p.sigma);
}

double gamma2_finite(const StationaryGaussianMeasure& g,
                     const CorrelationKernel& kernel, const ModelParams& p,
                     const QuadratureSpec& quad) {
  MeasureStats stats = stats_of_gaussian(g, p, p.n, quad);
  MatrixKernelSequence A = finite_a_sequence(stats, kernel, p, nullptr);
  double pair = 0.0;
  for (int k = -p.n; k <= p.n; ++k)
    pair += contraction(A.block(k), centered_block(stats, k));
  double value = pair + 2.0 * stats.c.dot(stats.v_mean) - stats.c.dot(stats.c);
  return value / (2.0 * p.sigma * p.sigma);
}

double gamma2_limit(const MeasureStats& stats, const CorrelationKernel& kernel,
                    const ModelParams& p) {
  if (stats.source != StatsSource::empirical)
    throw std::invalid_argument("gamma2_limit: expected empirical stats");
  LimitSpectralDensity density(stats, kernel, p);
  // The limit A-transform sampled at the window's atom frequencies equals the
  // alias-wrapped coefficient sequence, and the empirical v-moments are
  // N-periodic in the lag, so the infinite pairing collapses to the window.
  SpectralGrid atoms(p.n, stats.T);
  for (int m = -p.n; m <= p.n; ++m)
    atoms.value(m) = density.value(atoms.omega(m));
  MatrixKernelSequence A = a_coefficients(build_A_grid(atoms, p.sigma));
  double pair = 0.0;
  for (int k = -p.n; k <= p.n; ++k)
    pair += contraction(A.block(k), centered_block(stats, k));
  double value = pair + 2.0 * stats.c.dot(stats.v_mean) - stats.c.dot(stats.c);
  return value / (2.0 * p.sigma * p.sigma);
}

double gamma2_limit(const StationaryGaussianMeasure& g,
                    const CorrelationKernel& kernel, const ModelParams& p,
                    const QuadratureSpec& quad, const ConvergenceControl& ctrl) {
  const int L = g.support();
  MeasureStats stats = stats_of_gaussian(g, p, L, quad);
  LimitSpectralDensity density(stats, kernel, p);
  const double s2 = p.sigma * p.sigma;

  Eigen::MatrixXcd Sc = psd_a_transform(density.value(0.0), p.sigma);
  Eigen::MatrixXd S = Sc.real();
  if (Sc.imag().cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, S.cwiseAbs().maxCoeff()))
    throw std::runtime_error("gamma2_limit: A-transform at zero is not real");

  Eigen::VectorXd d = stats.v_mean - stats.c;
  double mean_term = d.dot(S * d) + 2.0 * stats.c.dot(stats.v_mean) -
                     stats.c.dot(stats.c);

  std::vector<Eigen::MatrixXd> Cv;  // v-covariance at lags -L..L
  Cv.reserve(2 * L + 1);
  for (int k = -L; k <= L; ++k)
    Cv.push_back(stats.v_second.block(k) -
                 stats.v_mean * stats.v_mean.transpose());

  int G = std::max(ctrl.initial_grid, 2 * L + 2);
  double prev = 0.0;
  for (int it = 0; it <= ctrl.max_doublings; ++it) {
    std::vector<Eigen::MatrixXcd> Ak(
        2 * L + 1, Eigen::MatrixXcd::Zero(stats.T, stats.T));
    for (int gi = 0; gi < G; ++gi) {
      double omega = kTwoPi * gi / G;
      Eigen::MatrixXcd Ah = psd_a_transform(density.value(omega), p.sigma);
      for (int k = -L; k <= L; ++k)
        Ak[k + L] += std::polar(1.0, k * omega) * Ah;
    }
    double pair = 0.0;
    double max_imag = 0.0;
    for (int k = -L; k <= L; ++k) {
      Ak[k + L] /= G;
      max_imag = std::max(max_imag, Ak[k + L].imag().cwiseAbs().maxCoeff());
      pair += contraction(Ak[k + L].real(), Cv[k + L]);
    }
    if (max_imag > 1e-9)
      throw std::runtime_error("gamma2_limit: imaginary residual too large");
    double val = (pair + mean_term) / (2.0 * s2);
    if (it > 0 && std::abs(val - prev) <= ctrl.tol * std::max(1.0, std::abs(val)))
      return val;
    prev = val;
    G *= 2;
  }
  throw std::runtime_error("gamma2_limit: frequency grid did not converge");
}

double beta2_bound(const CorrelationKernel& kernel, const ModelParams& p) {
  if (p.j_bar == 0.0) return 0.0;
  double mass = kernel.lambda_sum();
  if (!(mass > 0.0))
    throw std::invalid_argument(
        "beta2_bound: correlation mass must be positive when j_bar != 0");
  double num = p.T * p.j_bar * p.j_bar *
               (p.sigma * p.sigma + p.theta_std * p.theta_std +
                kernel.lambda_abs_sum());
  return num / (2.0 * p.sigma * p.sigma * mass);
}

double kl_gaussian(const Eigen::VectorXd& mean_mu, const Eigen::MatrixXd& cov_mu,
                   const Eigen::VectorXd& mean_ref, const Eigen::MatrixXd& cov_ref) {
  const int d = static_cast<int>(mean_mu.size());
  if (mean_ref.size() != d || cov_mu.rows() != d || cov_mu.cols() != d ||
      cov_ref.rows() != d || cov_ref.cols() != d)
    throw std::invalid_argument("kl_gaussian: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_ref(
      0.5 * (cov_ref + cov_ref.transpose()));
  double scale_ref = std::max(es_ref.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  double tol_ref = 1e-12 * scale_ref;
  if (es_ref.eigenvalues().minCoeff() < -tol_ref)
    throw std::runtime_error("kl_gaussian: reference covariance not PSD");
  if (es_ref.eigenvalues().minCoeff() <= tol_ref)
    throw std::runtime_error("kl_gaussian: reference covariance singular");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_mu(
      0.5 * (cov_mu + cov_mu.transpose()));
  double scale_mu = std::max(es_mu.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  double tol_mu = 1e-12 * std::max(scale_mu, 1e-300);
  if (es_mu.eigenvalues().minCoeff() < -tol_mu)
    throw std::runtime_error("kl_gaussian: covariance not PSD");
  if (es_mu.eigenvalues().minCoeff() <= tol_mu) return kInf;

  Eigen::VectorXd inv_ref = es_ref.eigenvalues().cwiseInverse();
  Eigen::MatrixXd ref_inv = es_ref.eigenvectors() * inv_ref.asDiagonal() *
                            es_ref.eigenvectors().transpose();

  double trace = (ref_inv * cov_mu).trace();
  Eigen::VectorXd diff = mean_mu - mean_ref;
  double quad = diff.dot(ref_inv * diff);
  double logdet_ref = es_ref.eigenvalues().array().log().sum();
  double logdet_mu = es_mu.eigenvalues().array().log().sum();
  return 0.5 * (trace - d + quad + logdet_ref - logdet_mu);
}

EntropyReport entropy_rate_gaussian(const StationaryGaussianMeasure& g,
                                    const ModelParams& p,
                                    const std::vector<int>& windows) {
  if (windows.empty())
    throw std::invalid_argument("entropy_rate_gaussian: empty window schedule");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i] < 0)
      throw std::invalid_argument("entropy_rate_gaussian: negative window");
    if (i > 0 && windows[i] <= windows[i - 1])
      throw std::invalid_argument("entropy_rate_gaussian: schedule must increase");
  }
  if (g.horizon() != p.T)
    throw std::invalid_argument("entropy_rate_gaussian: horizon mismatch");

  StationaryGaussianMeasure ref = reference_gaussian_law(p);
  const Eigen::MatrixXd& SigmaP = ref.autocov[0];
  const int d = p.T + 1;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(SigmaP);
  double tol = 1e-12 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (es.eigenvalues().minCoeff() <= tol)
    throw std::runtime_error(
        "entropy_rate_gaussian: reference window covariance is singular");
  Eigen::MatrixXd Pinv = es.eigenvectors() *
                         es.eigenvalues().cwiseInverse().asDiagonal() *
                         es.eigenvectors().transpose();
  double logdet_P = es.eigenvalues().array().log().sum();
  Eigen::VectorXd dm = g.mean - ref.mean;
  double qf = dm.dot(Pinv * dm);

  EntropyReport report;
  report.windows = windows;
  for (int n : windows) {
    const int N = 2 * n + 1;
    std::vector<Eigen::MatrixXd> wrapped = wrapped_autocov(g, n);
    MatrixKernelSequence seq(n, d);
    for (int k = -n; k <= n; ++k) seq.block(k) = wrapped[k + n];
    SpectralGrid grid = dft_sequence(seq);

    double trace_term = (Pinv * wrapped[n]).trace();
    double logdet_w = 0.0;
    bool singular = false;
    for (int m = -n; m <= n && !singular; ++m) {
      Eigen::MatrixXcd H = 0.5 * (grid.value(m) + grid.value(m).adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ew(H);
      double wtol = 1e-10 * std::max(H.trace().real() / d, 0.0);
      for (int i = 0; i < d; ++i) {
        double lam = ew.eigenvalues()(i);
        if (lam < -wtol)
          throw std::runtime_error(
              "entropy_rate_gaussian: wrapped window covariance not PSD");
        if (lam <= wtol) {
          singular = true;
          break;
        }
        logdet_w += std::log(lam);
      }
    }
    double a = singular
                   ? kInf
                   : 0.5 * (trace_term - d + qf + logdet_P - logdet_w / N);
    report.values.push_back(a);
  }

  report.value = report.values.back();
  report.increment =
      report.values.size() > 1
          ? std::abs(report.values.back() - report.values[report.values.size() - 2])
          : 0.0;
  report.extrapolated = aitken_tail(report.values);
  return report;
}

HReport rate_function_H(const StationaryGaussianMeasure& g,
                        const CorrelationKernel& kernel, const ModelParams& p,
                        const std::vector<int>& windows,
                        const QuadratureSpec& quad) {
  HReport h;
  h.entropy = entropy_rate_gaussian(g, p, windows);
  h.i3 = h.entropy.extrapolated;

  MeasureStats stats = stats_of_gaussian(g, p, g.support(), quad);
  LimitSpectralDensity density(stats, kernel, p);
  h.gamma1 = gamma1_limit(density, p.sigma);
  h.gamma2 = gamma2_limit(g, kernel, p, quad);
  h.value = std::isfinite(h.i3) ? h.i3 - h.gamma1 - h.gamma2 : kInf;
  return h;
}

GammaReport gamma_report(const EmpiricalMeasure& em, const CorrelationKernel& kernel,
                         const ModelParams& p) {
  GammaReport r;
  MeasureStats stats = stats_of_empirical(em, p);
  SpectralGrid Kgrid;
  MatrixKernelSequence A = finite_a_sequence(stats, kernel, p, &Kgrid);
  r.gamma1_n = gamma1_finite(Kgrid, p.sigma);
  Eigen::MatrixXd v = drop_initial_column(psi_map(em.config, p));
  r.gamma2_n = phi_n(stats, A, v, p.sigma);
  r.gamma_n = r.gamma1_n + r.gamma2_n;

  LimitSpectralDensity density(stats, kernel, p);
  r.gamma1_lim = gamma1_limit(density, p.sigma, {}, &r.gamma1_grid);
  r.gamma2_lim = gamma2_limit(stats, kernel, p);
  r.gamma_lim = r.gamma1_lim + r.gamma2_lim;
  r.beta2 = beta2_bound(kernel, p);
  return r;
}

GammaReport gamma_report(const StationaryGaussianMeasure& g,
                         const CorrelationKernel& kernel, const ModelParams& p,
                         const QuadratureSpec& quad) {
  GammaReport r;
  MeasureStats stats = stats_of_gaussian(g, p, p.n, quad);
  SpectralGrid Kgrid;
  MatrixKernelSequence A = finite_a_sequence(stats, kernel, p, &Kgrid);
  r.gamma1_n = gamma1_finite(Kgrid, p.sigma);
  double pair = 0.0;
  for (int k = -p.n; k <= p.n; ++k)
    pair += contraction(A.block(k), centered_block(stats, k));
  r.gamma2_n = (pair + 2.0 * stats.c.dot(stats.v_mean) - stats.c.dot(stats.c)) /
               (2.0 * p.sigma * p.sigma);
  r.gamma_n = r.gamma1_n + r.gamma2_n;

  MeasureStats lim_stats = stats_of_gaussian(g, p, g.support(), quad);
  LimitSpectralDensity density(lim_stats, kernel, p);
  r.gamma1_lim = gamma1_limit(density, p.sigma, {}, &r.gamma1_grid);
  r.gamma2_lim = gamma2_limit(g, kernel, p, quad);
  r.gamma_lim = r.gamma1_lim + r.gamma2_lim;
  r.beta2 = beta2_bound(kernel, p);
  return r;
}

}  // namespace ldnet
