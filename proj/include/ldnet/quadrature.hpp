#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ldnet {

struct QuadratureSpec {
  int order = 32;  // nodes per axis
};

// Gauss-Hermite rule (weight e^{-x^2}), nodes ascending. Computed once per
// order via the Golub-Welsch tridiagonal eigenproblem and cached.
const std::vector<double>& gauss_hermite_nodes(int order);
const std::vector<double>& gauss_hermite_weights(int order);

// E[g(X)] for X ~ N(mean, var), var >= 0.
double gaussian_expect(double mean, double var,
                       const std::function<double(double)>& g,
                       const QuadratureSpec& q = {});

// E[g(X,Y)] for (X,Y) jointly Gaussian; cov is 2x2, whitened through a
// symmetric square root with tiny negative eigenvalues clamped to zero.
double gaussian_expect2(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov,
                        const std::function<double(double, double)>& g,
                        const QuadratureSpec& q = {});

}  // namespace ldnet
