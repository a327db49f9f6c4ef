#include "ldnet/empirical.hpp"

#include <stdexcept>
#include <vector>

#include "ldnet/numeric.hpp"

namespace ldnet {

PathConfiguration shift(const PathConfiguration& u, int m) {
  const int N = u.num_neurons();
  PathConfiguration out = u;
  for (int r = 0; r < N; ++r) {
    int src = (r + m) % N;
    if (src < 0) src += N;
    out.values.row(r) = u.values.row(src);
  }
  return out;
}

namespace {

int wrap_row(int r, int N) {
  int w = r % N;
  return w < 0 ? w + N : w;
}

// sum over neurons of lhs(j) * rhs(j+k), in sorted order
double lag_moment(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                  int cl, int cr, int k, std::vector<double>& scratch) {
  const int N = static_cast<int>(lhs.rows());
  scratch.resize(N);
  for (int r = 0; r < N; ++r)
    scratch[r] = lhs(r, cl) * rhs(wrap_row(r + k, N), cr);
  return permutation_invariant_sum(scratch);
}

double column_mean(const Eigen::MatrixXd& mat, int col,
                   std::vector<double>& scratch) {
  const int N = static_cast<int>(mat.rows());
  scratch.resize(N);
  for (int r = 0; r < N; ++r) scratch[r] = mat(r, col);
  return permutation_invariant_sum(scratch) / N;
}

}  // namespace

MeasureStats stats_of_empirical(const EmpiricalMeasure& em, const ModelParams& p) {
  const PathConfiguration& u = em.config;
  if (u.n != p.n || u.T != p.T)
    throw std::invalid_argument("configuration shape does not match model params");
  const int N = u.num_neurons();
  const int T = p.T;

  Eigen::MatrixXd fired(N, T);  // f(u_t), t = 0..T-1
  for (int r = 0; r < N; ++r)
    for (int t = 0; t < T; ++t) fired(r, t) = p.gain(u.values(r, t));

  Eigen::MatrixXd v(N, T);  // v_t = u_t - gamma u_{t-1} - theta_bar, t = 1..T
  for (int r = 0; r < N; ++r)
    for (int t = 1; t <= T; ++t)
      v(r, t - 1) = u.values(r, t) - p.gamma * u.values(r, t - 1) - p.theta_bar;

  MeasureStats s;
  s.source = StatsSource::empirical;
  s.T = T;
  s.j_bar = p.j_bar;
  s.f_mean.resize(T);
  s.v_mean.resize(T);
  s.M = MatrixKernelSequence(p.n, T);
  s.v_second = MatrixKernelSequence(p.n, T);

  std::vector<double> scratch;
  for (int t = 0; t < T; ++t) {
    s.f_mean(t) = column_mean(fired, t, scratch);
    s.v_mean(t) = column_mean(v, t, scratch);
  }
  s.c = p.j_bar * s.f_mean;

  for (int k = -p.n; k <= p.n; ++k) {
    Eigen::MatrixXd& Mk = s.M.block(k);
    Eigen::MatrixXd& Vk = s.v_second.block(k);
    for (int a = 0; a < T; ++a)
      for (int b = 0; b < T; ++b) {
        Mk(a, b) = lag_moment(fired, fired, a, b, k, scratch) / N;
        Vk(a, b) = lag_moment(v, v, a, b, k, scratch) / N;
      }
  }
  return s;
}

MeasureStats stats_of_gaussian(const StationaryGaussianMeasure& g,
                               const ModelParams& p, int lag_count,
                               const QuadratureSpec& quad) {
  if (g.horizon() != p.T)
    throw std::invalid_argument("measure horizon does not match model params");
  if (lag_count < 0) throw std::invalid_argument("lag_count must be >= 0");
  const int T = p.T;
  const auto& f = p.gain;

  MeasureStats s;
  s.source = StatsSource::analytic;
  s.T = T;
  s.j_bar = p.j_bar;
  s.f_mean.resize(T);
  s.v_mean.resize(T);
  s.M = MatrixKernelSequence(lag_count, T);
  s.v_second = MatrixKernelSequence(lag_count, T);

  const Eigen::MatrixXd& C0 = g.autocov_at(0);
  for (int t = 0; t < T; ++t) {
    s.f_mean(t) = gaussian_expect(
        g.mean(t), C0(t, t), [&](double x) { return f(x); }, quad);
    s.v_mean(t) = g.mean(t + 1) - p.gamma * g.mean(t) - p.theta_bar;
  }
  s.c = p.j_bar * s.f_mean;

  auto v_cov = [&](const Eigen::MatrixXd& Ck, int a, int b) {
    // a, b are v indices (0-based for times 1..T)
    return Ck(a + 1, b + 1) - p.gamma * Ck(a + 1, b) - p.gamma * Ck(a, b + 1) +
           p.gamma * p.gamma * Ck(a, b);
  };

  for (int k = 0; k <= lag_count; ++k) {
    Eigen::MatrixXd& Mk = s.M.block(k);
    Eigen::MatrixXd& Vk = s.v_second.block(k);
    if (k > g.support()) {
      Mk = s.f_mean * s.f_mean.transpose();
      Vk = s.v_mean * s.v_mean.transpose();
    } else {
      const Eigen::MatrixXd& Ck = g.autocov_at(k);
      for (int a = 0; a < T; ++a)
        for (int b = 0; b < T; ++b) {
          Eigen::Vector2d mean2(g.mean(a), g.mean(b));
          Eigen::Matrix2d cov2;
          cov2 << C0(a, a), Ck(a, b), Ck(a, b), C0(b, b);
          Mk(a, b) = gaussian_expect2(
              mean2, cov2, [&](double x, double y) { return f(x) * f(y); },
              quad);
          Vk(a, b) = v_cov(Ck, a, b) + s.v_mean(a) * s.v_mean(b);
        }
    }
    if (k > 0) {
      s.M.block(-k) = Mk.transpose();
      s.v_second.block(-k) = Vk.transpose();
    }
  }
  return s;
}

MeasureStats restrict_stats(const MeasureStats& stats, int new_half) {
  MeasureStats out = stats;
  out.M = stats.M.restricted(new_half);
  out.v_second = stats.v_second.restricted(new_half);
  return out;
}

}  // namespace ldnet
