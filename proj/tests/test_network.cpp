#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldnet/gaussian_measure.hpp"
#include "ldnet/network.hpp"
#include "ldnet/numeric.hpp"
#include "ldnet/rng.hpp"

using namespace ldnet;
using rng::Draw;

TEST_CASE("path configuration indexing wraps on the torus") {
  PathConfiguration u;
  u.n = 1;
  u.T = 0;
  u.values.resize(3, 1);
  u.values << 10, 20, 30;  // rows are j = -1, 0, 1
  CHECK(u.at(-1, 0) == 10);
  CHECK(u.at(0, 0) == 20);
  CHECK(u.at(1, 0) == 30);
  CHECK(u.at(2, 0) == 10);   // 2 = -1 mod V_1
  CHECK(u.at(-2, 0) == 30);
}

TEST_CASE("torus spectrum of the dirac kernel is flat") {
  ModelParams p;
  p.n = 1;
  p.T = 1;
  p.j_bar = 0.9;
  auto spec = build_torus_spectrum(CorrelationKernel::dirac(0.25), p);
  CHECK(spec.mean_offset == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(spec.clamped_count == 0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(spec.eigenvalues(a, b) == doctest::Approx(0.25 / 3.0).epsilon(1e-13));
}

TEST_CASE("strongly indefinite kernels are rejected") {
  ModelParams p;
  p.n = 0;
  p.T = 1;
  Eigen::MatrixXd vals(1, 1);
  vals << -1.0;
  auto bad = CorrelationKernel::table(vals, 0, 0);
  CHECK_THROWS_AS(build_torus_spectrum(bad, p), std::runtime_error);
}

TEST_CASE("weight sampler hits the prescribed first and second moments") {
  ModelParams p;
  p.n = 1;
  p.T = 1;
  p.j_bar = 0.9;
  auto kernel = CorrelationKernel::separable_geometric(1.0, 0.5, 0.4);
  auto spec = build_torus_spectrum(kernel, p);
  rng::Stream s(7);

  const int N = 3, R = 20000;
  std::vector<WeightMatrix> draws;
  draws.reserve(R);
  for (int r = 0; r < R; ++r) draws.push_back(sample_weights(spec, s, uint32_t(r)));

  const double m0 = p.j_bar / N;
  std::vector<double> cell(R);
  for (int r = 0; r < R; ++r) cell[size_t(r)] = draws[size_t(r)].entries(0, 0);
  double mean_hat = pairwise_sum(cell) / R;
  double se_mean = std::sqrt(kernel(0, 0) / N / R);
  CHECK(std::abs(mean_hat - m0) < 4 * se_mean);

  // lag covariance, averaged over all grid positions of one draw
  auto cov_at = [&](int dk, int dl) {
    std::vector<double> prod(R);
    for (int r = 0; r < R; ++r) {
      const auto& J = draws[size_t(r)].entries;
      double acc = 0.0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          acc += (J(i, j) - m0) * (J((i + dk) % N, (j + dl) % N) - m0);
      prod[size_t(r)] = acc / (N * N);
    }
    return pairwise_sum(prod) / R;
  };
  // positions within a draw are correlated; take the no-averaging-gain SE
  double se_cov = std::sqrt(2.0) * (kernel(0, 0) / N) / std::sqrt(double(R));
  CHECK(std::abs(cov_at(0, 0) - kernel(0, 0) / N) < 5 * se_cov);
  CHECK(std::abs(cov_at(1, 0) - kernel(1, 0) / N) < 5 * se_cov);
  CHECK(std::abs(cov_at(0, 1) - kernel(0, 1) / N) < 5 * se_cov);
  CHECK(std::abs(cov_at(1, 1) - kernel(1, 1) / N) < 5 * se_cov);
  CHECK(std::abs(cov_at(2, 1) - kernel(-1, 1) / N) < 5 * se_cov);

  // determinism in the (seed, replicate) address
  auto again = sample_weights(spec, s, 5);
  CHECK((again.entries - draws[5].entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK((draws[5].entries - draws[6].entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("dense factorization sampler agrees with the spectral one") {
  ModelParams p;
  p.n = 1;
  p.T = 1;
  p.j_bar = 0.6;
  auto kernel = CorrelationKernel::separable_geometric(0.8, 0.5, 0.4);
  DenseWeightSampler dense(kernel, p);
  rng::Stream s(11);

  const int N = 3, R = 20000;
  std::vector<double> mean_cell(R), var_cell(R), lag_cell(R);
  for (int r = 0; r < R; ++r) {
    auto J = dense.sample(s, uint32_t(r)).entries;
    mean_cell[size_t(r)] = J(1, 1);
    var_cell[size_t(r)] = (J(1, 1) - 0.2) * (J(1, 1) - 0.2);
    lag_cell[size_t(r)] = (J(0, 0) - 0.2) * (J(1, 1) - 0.2);
  }
  double mhat = pairwise_sum(mean_cell) / R;
  double vhat = pairwise_sum(var_cell) / R;
  double lhat = pairwise_sum(lag_cell) / R;
  double v0 = kernel(0, 0) / N;
  CHECK(std::abs(mhat - 0.2) < 4 * std::sqrt(v0 / R));
  CHECK(std::abs(vhat - v0) < 5 * std::sqrt(2.0) * v0 / std::sqrt(double(R)));
  CHECK(std::abs(lhat - kernel(1, 1) / N) < 5 * std::sqrt(2.0) * v0 / std::sqrt(double(R)));
}

TEST_CASE("reference simulation reproduces the stated recursion") {
  ModelParams p;
  p.n = 0;
  p.T = 2;
  p.gamma = 0.5;
  p.sigma = 0.7;
  p.theta_bar = 1.0;
  p.init_law = InitLaw::gaussian(0.2, 1.3);
  rng::Stream s(99);
  const uint32_t rep = 4;

  auto u = simulate_reference(p, s, rep);

  double u0 = p.init_law.from_standard_normal(s.normal(Draw::init_state, rep, 0));
  double n0 = 0.7 * s.normal(Draw::step_noise, rep, 0, 0);
  double u1 = 0.5 * u0 + 1.0 + n0;
  double n1 = 0.7 * s.normal(Draw::step_noise, rep, 0, 1);
  double u2 = 0.5 * u1 + 1.0 + n1;
  CHECK(u.values(0, 0) == u0);
  CHECK(u.values(0, 1) == u1);
  CHECK(u.values(0, 2) == u2);
}

TEST_CASE("coupled simulation reproduces the stated recursion") {
  ModelParams p;
  p.n = 1;
  p.T = 2;
  p.gamma = 0.4;
  p.sigma = 0.9;
  p.theta_bar = 0.3;
  p.theta_std = 0.2;
  rng::Stream s(123);
  const uint32_t rep = 2;

  WeightMatrix W;
  W.n = 1;
  W.entries.resize(3, 3);
  W.entries << 0.1, -0.2, 0.3,
               0.0, 0.25, -0.1,
               0.15, 0.05, 0.2;

  auto u = simulate_network(p, W, s, rep);

  Eigen::VectorXd prev(3), theta(3);
  for (int r = 0; r < 3; ++r) {
    prev(r) = p.init_law.from_standard_normal(s.normal(Draw::init_state, rep, uint32_t(r)));
    theta(r) = 0.3 + 0.2 * s.normal(Draw::theta, rep, uint32_t(r));
    CHECK(u.values(r, 0) == prev(r));
  }
  for (int t = 1; t <= 2; ++t) {
    Eigen::VectorXd fired(3);
    for (int r = 0; r < 3; ++r) fired(r) = p.gain(prev(r));
    Eigen::VectorXd drive = W.entries * fired;
    Eigen::VectorXd next(3);
    for (int r = 0; r < 3; ++r) {
      double noise = 0.9 * s.normal(Draw::step_noise, rep, uint32_t(r), uint32_t(t - 1));
      next(r) = 0.4 * prev(r) + drive(r) + theta(r) + noise;
      CHECK(u.values(r, t) == next(r));
    }
    prev = next;
  }
}

TEST_CASE("degenerate coupling reduces to the reference process pathwise") {
  ModelParams p;
  p.n = 1;
  p.T = 3;
  p.j_bar = 0.0;
  p.theta_std = 0.0;
  auto spec = build_torus_spectrum(CorrelationKernel::dirac(0.0), p);
  rng::Stream s(5);
  auto J = sample_weights(spec, s, 0);
  CHECK(J.entries.cwiseAbs().maxCoeff() == 0.0);
  auto a = simulate_network(p, J, s, 3);
  auto b = simulate_reference(p, s, 3);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reference law matches hand recursion values") {
  ModelParams p;
  p.n = 0;
  p.T = 2;
  p.gamma = 0.5;
  p.sigma = 1.0;
  p.theta_bar = 1.0;
  p.init_law = InitLaw::gaussian(0.0, 1.0);
  auto g = reference_gaussian_law(p);
  REQUIRE(g.horizon() == 2);
  REQUIRE(g.support() == 0);
  CHECK(g.mean(0) == doctest::Approx(0.0));
  CHECK(g.mean(1) == doctest::Approx(1.0));
  CHECK(g.mean(2) == doctest::Approx(1.5));
  const auto& C = g.autocov[0];
  CHECK(C(0, 0) == doctest::Approx(1.0));
  CHECK(C(1, 1) == doctest::Approx(1.25));
  CHECK(C(2, 2) == doctest::Approx(1.3125));
  CHECK(C(0, 1) == doctest::Approx(0.5));
  CHECK(C(0, 2) == doctest::Approx(0.25));
  CHECK(C(1, 2) == doctest::Approx(0.625));
}

TEST_CASE("reference simulation matches its law in distribution") {
  ModelParams p;
  p.n = 0;
  p.T = 2;
  p.gamma = 0.5;
  p.sigma = 1.0;
  p.theta_bar = 1.0;
  auto g = reference_gaussian_law(p);
  rng::Stream s(31);
  const int R = 20000;
  std::vector<double> u1(R), u2(R);
  for (int r = 0; r < R; ++r) {
    auto u = simulate_reference(p, s, uint32_t(r));
    u1[size_t(r)] = u.values(0, 1);
    u2[size_t(r)] = u.values(0, 2);
  }
  double m1 = pairwise_sum(u1) / R;
  double m2 = pairwise_sum(u2) / R;
  CHECK(std::abs(m1 - g.mean(1)) < 4 * std::sqrt(g.autocov[0](1, 1) / R));
  CHECK(std::abs(m2 - g.mean(2)) < 4 * std::sqrt(g.autocov[0](2, 2) / R));
  std::vector<double> sq(R);
  for (int r = 0; r < R; ++r) sq[size_t(r)] = (u2[size_t(r)] - m2) * (u2[size_t(r)] - m2);
  double v2 = pairwise_sum(sq) / (R - 1);
  double target = g.autocov[0](2, 2);
  CHECK(std::abs(v2 - target) < 5 * std::sqrt(2.0) * target / std::sqrt(double(R)));
}

TEST_CASE("shifted reference law moves only the mean") {
  ModelParams p;
  p.n = 0;
  p.T = 2;
  auto base = reference_gaussian_law(p);
  auto shifted = shifted_reference_law(p, 0.8);
  CHECK(shifted.mean(0) == doctest::Approx(base.mean(0) + 0.8));
  CHECK(shifted.mean(1) == doctest::Approx(base.mean(1) + 0.8 * p.gamma));
  CHECK(shifted.mean(2) == doctest::Approx(base.mean(2) + 0.8 * p.gamma * p.gamma));
  CHECK((shifted.autocov[0] - base.autocov[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("innovation map and its inverse") {
  ModelParams p;
  p.n = 0;
  p.T = 2;
  p.gamma = 0.5;
  p.theta_bar = 1.0;
  PathConfiguration u;
  u.n = 0;
  u.T = 2;
  u.values.resize(1, 3);
  u.values << 2.0, 3.0, 4.0;
  auto v = psi_map(u, p);
  CHECK(v.values(0, 0) == doctest::Approx(2.0));
  CHECK(v.values(0, 1) == doctest::Approx(1.0));    // 3 - 0.5*2 - 1
  CHECK(v.values(0, 2) == doctest::Approx(1.5));    // 4 - 0.5*3 - 1
  auto back = psi_inverse(v, p);
  CHECK((back.values - u.values).cwiseAbs().maxCoeff() < 1e-13);

  Eigen::MatrixXd tail = drop_initial_column(v);
  REQUIRE(tail.cols() == 2);
  CHECK(tail(0, 0) == v.values(0, 1));
  CHECK(tail(0, 1) == v.values(0, 2));
}

TEST_CASE("circulant wrap aliases lags beyond the window") {
  Eigen::VectorXd mean(2);
  mean << 0.1, -0.2;
  Eigen::MatrixXd tc(2, 2);
  tc << 1.0, 0.3,
        0.3, 0.8;
  auto g = separable_gaussian_measure(mean, tc, 0.6, 2, false);
  REQUIRE(g.support() == 2);

  // window larger than the support: plain copy
  auto w2 = wrapped_autocov(g, 2);
  for (int k = -2; k <= 2; ++k)
    CHECK((w2[size_t(k + 2)] - g.autocov_at(k)).cwiseAbs().maxCoeff() == 0.0);

  // window n=1 (N=3): lag -1 also picks up lag 2
  auto w1 = wrapped_autocov(g, 1);
  CHECK((w1[0] - (g.autocov_at(-1) + g.autocov_at(2))).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w1[2] - (g.autocov_at(1) + g.autocov_at(-2))).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w1[1] - g.autocov_at(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("window sampler reproduces the wrapped law") {
  Eigen::VectorXd mean(2);
  mean << 0.4, 1.1;
  Eigen::MatrixXd tc(2, 2);
  tc << 0.9, 0.2,
        0.2, 0.7;
  auto g = separable_gaussian_measure(mean, tc, 0.5, 1, true);
  const int n = 1, N = 3;
  WindowSampler sampler(g, n);
  auto w = wrapped_window(g, n);
  rng::Stream s(17);

  const int R = 20000;
  std::vector<double> a(R), b(R), prod(R);
  for (int r = 0; r < R; ++r) {
    auto u = sampler.sample(s, uint32_t(r));
    a[size_t(r)] = u.values(0, 1);  // neuron -1, time 1
    b[size_t(r)] = u.values(1, 0);  // neuron 0, time 0
  }
  double ma = pairwise_sum(a) / R;
  double mb = pairwise_sum(b) / R;
  CHECK(std::abs(ma - mean(1)) < 4 * std::sqrt(w.cov(1, 1) / R));
  CHECK(std::abs(mb - mean(0)) < 4 * std::sqrt(w.cov(2, 2) / R));
  for (int r = 0; r < R; ++r)
    prod[size_t(r)] = (a[size_t(r)] - ma) * (b[size_t(r)] - mb);
  double chat = pairwise_sum(prod) / (R - 1);
  double target = w.cov(1, 2);  // cov(u^{-1}_1, u^0_0) in window coordinates
  double scale = std::sqrt(w.cov(1, 1) * w.cov(2, 2));
  CHECK(std::abs(chat - target) < 5 * scale / std::sqrt(double(R)));
}
