#include "ldnet/rncheck.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ldnet/empirical.hpp"
#include "ldnet/numeric.hpp"
#include "ldnet/rate.hpp"

namespace ldnet {

namespace {

// Replicate-index bases keep the Monte-Carlo ensembles on disjoint counter
// ranges, away from anything a direct simulation run might use.
constexpr uint32_t kRnBase = 0x40000000u;
constexpr uint32_t kPushRefBase = 0x60000000u;
constexpr uint32_t kPushCoupledBase = 0x80000000u;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  MeanSe out;
  out.mean = pairwise_sum(xs) / static_cast<double>(n);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = xs[i] - out.mean;
    d2[i] = d * d;
  }
  double var = pairwise_sum(d2) / static_cast<double>(n - 1);
  out.se = std::sqrt(var / static_cast<double>(n));
  return out;
}

double safe_z(double diff, double se) {
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

}  // namespace

McEstimate rn_mc_estimate(const PathConfiguration& u, const CorrelationKernel& kernel,
                          const ModelParams& p, int samples,
                          const rng::Stream& stream, int threads) {
  if (samples < 2) throw std::invalid_argument("rn_mc_estimate: samples must be >= 2");
  if (u.n != p.n || u.T != p.T)
    throw std::invalid_argument("rn_mc_estimate: configuration shape mismatch");
  const int N = u.num_neurons();
  const int T = p.T;
  const double s2 = p.sigma * p.sigma;

  Eigen::MatrixXd fired(N, T);
  for (int i = 0; i < N; ++i)
    for (int t = 0; t < T; ++t) fired(i, t) = p.gain(u.values(i, t));
  Eigen::MatrixXd v = drop_initial_column(psi_map(u, p));

  TorusSpectrum spectrum = build_torus_spectrum(kernel, p);

  std::vector<double> expo(samples);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t r) {
    uint32_t rep = kRnBase + static_cast<uint32_t>(r);
    WeightMatrix J = sample_weights(spectrum, stream, rep);
    Eigen::MatrixXd G = J.entries * fired;
    if (p.theta_std > 0.0)
      for (int i = 0; i < N; ++i)
        G.row(i).array() += p.theta_std * stream.normal(rng::Draw::theta, rep, i);
    expo[r] = ((v.array() * G.array()).sum() - 0.5 * G.squaredNorm()) / s2;
  });

  double xmax = expo[0], xabs = 0.0;
  for (double x : expo) {
    xmax = std::max(xmax, x);
    xabs = std::max(xabs, std::abs(x));
  }
  std::vector<double> shifted(expo.size());
  for (std::size_t i = 0; i < expo.size(); ++i) shifted[i] = std::exp(expo[i] - xmax);
  MeanSe ms = mean_and_se(shifted);

  McEstimate est;
  est.samples = samples;
  est.log_mean = xmax + std::log(ms.mean);
  est.std_error = ms.se / ms.mean;
  est.max_abs_exponent = xabs;
  return est;
}

double rn_analytic(const PathConfiguration& u, const CorrelationKernel& kernel,
                   const ModelParams& p) {
  EmpiricalMeasure em{u};
  MeasureStats stats = stats_of_empirical(em, p);
  SpectralGrid Kgrid = dft_sequence(build_K_sequence(stats, kernel, p));
  double g1 = gamma1_finite(Kgrid, p.sigma);
  MatrixKernelSequence A = a_coefficients(build_A_grid(Kgrid, p.sigma));
  Eigen::MatrixXd v = drop_initial_column(psi_map(u, p));
  double g2 = phi_n(stats, A, v, p.sigma);
  return u.num_neurons() * (g1 + g2);
}

RnReport rn_check(const PathConfiguration& u, const CorrelationKernel& kernel,
                  const ModelParams& p, int samples, const rng::Stream& stream,
                  int threads, double warn_nats) {
  McEstimate mc = rn_mc_estimate(u, kernel, p, samples, stream, threads);
  RnReport rep;
  rep.mc_log = mc.log_mean;
  rep.mc_se = mc.std_error;
  rep.analytic = rn_analytic(u, kernel, p);
  rep.z = safe_z(rep.mc_log - rep.analytic, rep.mc_se);
  rep.unreliable = mc.max_abs_exponent > warn_nats;
  rep.samples = samples;
  return rep;
}

double PathFunctional::evaluate(const PathConfiguration& u, const ModelParams& p) const {
  const int N = u.num_neurons();
  auto check_time = [&](int idx, int lo) {
    if (idx < lo || idx > p.T)
      throw std::invalid_argument("path functional: time index out of range");
  };
  switch (kind) {
    case Kind::one:
      return 1.0;
    case Kind::mean_gain: {
      check_time(t, 0);
      double acc = 0.0;
      for (int i = 0; i < N; ++i) acc += p.gain(u.values(i, t));
      return acc / N;
    }
    case Kind::lag_gain_correlation: {
      check_time(s, 0);
      check_time(t, 0);
      double acc = 0.0;
      for (int i = 0; i < N; ++i) {
        int ik = (i + k) % N;
        if (ik < 0) ik += N;
        acc += p.gain(u.values(i, s)) * p.gain(u.values(ik, t));
      }
      return acc / N;
    }
    case Kind::half_space_c: {
      check_time(t, 1);
      double acc = 0.0;
      for (int i = 0; i < N; ++i) acc += p.gain(u.values(i, t - 1));
      double ct = p.j_bar * acc / N;
      return ct >= threshold ? 1.0 : 0.0;
    }
  }
  throw std::logic_error("path functional: unknown kind");
}

PushforwardReport pushforward_check(const PathFunctional& f,
                                    const CorrelationKernel& kernel,
                                    const ModelParams& p, int samples,
                                    const rng::Stream& stream, int threads,
                                    double warn_nats) {
  if (samples < 2)
    throw std::invalid_argument("pushforward_check: samples must be >= 2");

  std::vector<double> fval(samples), gval(samples);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t r) {
    uint32_t rep = kPushRefBase + static_cast<uint32_t>(r);
    PathConfiguration u = simulate_reference(p, stream, rep);
    fval[r] = f.evaluate(u, p);
    gval[r] = rn_analytic(u, kernel, p);
  });

  double gmax = gval[0], gabs = 0.0;
  for (double g : gval) {
    gmax = std::max(gmax, g);
    gabs = std::max(gabs, std::abs(g));
  }
  std::vector<double> weighted(gval.size());
  for (std::size_t i = 0; i < gval.size(); ++i)
    weighted[i] = fval[i] * std::exp(gval[i] - gmax);
  MeanSe lhs = mean_and_se(weighted);
  double scale = std::exp(gmax);

  TorusSpectrum spectrum = build_torus_spectrum(kernel, p);
  std::vector<double> bval(samples);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t r) {
    uint32_t rep = kPushCoupledBase + static_cast<uint32_t>(r);
    WeightMatrix J = sample_weights(spectrum, stream, rep);
    PathConfiguration u = simulate_network(p, J, stream, rep);
    bval[r] = f.evaluate(u, p);
  });
  MeanSe rhs = mean_and_se(bval);

  PushforwardReport rep;
  rep.lhs = scale * lhs.mean;
  rep.lhs_se = scale * lhs.se;
  rep.rhs = rhs.mean;
  rep.rhs_se = rhs.se;
  rep.z = safe_z(rep.lhs - rep.rhs, std::hypot(rep.lhs_se, rep.rhs_se));
  rep.unreliable = gabs > warn_nats;
  rep.samples = samples;
  return rep;
}

}  // namespace ldnet
