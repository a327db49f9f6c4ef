#include "ldnet/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ldnet {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule compute_rule(int order) {
  if (order < 1 || order > 256) throw std::invalid_argument("quadrature order out of range");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    double b = std::sqrt(0.5 * i);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = kSqrtPi * v0 * v0;
  }
  return r;
}

const Rule& cached_rule(int order) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gauss_hermite_nodes(int order) {
  return cached_rule(order).nodes;
}

const std::vector<double>& gauss_hermite_weights(int order) {
  return cached_rule(order).weights;
}

double gaussian_expect(double mean, double var,
                       const std::function<double(double)>& g,
                       const QuadratureSpec& q) {
  if (!(var >= 0.0)) {
    if (var > -1e-12 * std::max(1.0, std::abs(var))) var = 0.0;
    else throw std::runtime_error("gaussian_expect: negative variance");
  }
  const Rule& r = cached_rule(q.order);
  double sd = std::sqrt(var);
  double s = 0.0;
  for (int i = 0; i < q.order; ++i)
    s += r.weights[i] * g(mean + sd * M_SQRT2 * r.nodes[i]);
  return s / kSqrtPi;
}

double gaussian_expect2(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov,
                        const std::function<double(double, double)>& g,
                        const QuadratureSpec& q) {
  Eigen::Matrix2d sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sym);
  double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  double tol = 1e-10 * std::max(lmax, 1e-300);
  Eigen::Vector2d lam = es.eigenvalues();
  for (int i = 0; i < 2; ++i) {
    if (lam(i) < -tol) throw std::runtime_error("gaussian_expect2: covariance not PSD");
    if (lam(i) < 0.0) lam(i) = 0.0;
  }
  Eigen::Matrix2d root =
      es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Rule& r = cached_rule(q.order);
  double s = 0.0;
  for (int i = 0; i < q.order; ++i) {
    double zi = M_SQRT2 * r.nodes[i];
    for (int j = 0; j < q.order; ++j) {
      double zj = M_SQRT2 * r.nodes[j];
      double x = mean(0) + root(0, 0) * zi + root(0, 1) * zj;
      double y = mean(1) + root(1, 0) * zi + root(1, 1) * zj;
      s += r.weights[i] * r.weights[j] * g(x, y);
    }
  }
  return s / (kSqrtPi * kSqrtPi);
}

}  // namespace ldnet
