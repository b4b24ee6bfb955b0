#include "vpfp/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "vpfp/errors.hpp"

namespace vpfp {

QuadratureRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n must be positive");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

HermiteRule gauss_hermite(int n) {
  require(n >= 1, "gauss_hermite: n must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled.resize(n);
  const double e0 = std::pow(2.0 * std::numbers::pi, -0.25);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    // Newton polish on the normalized Hermite function h_n
    for (int it = 0; it < 3; ++it) {
      double hm = 0.0, h = e0 * std::exp(-0.25 * x * x);
      for (int k = 0; k < n; ++k) {
        double hp = (x * h - std::sqrt(double(k)) * hm) / std::sqrt(double(k + 1));
        hm = h;
        h = hp;
      }
      // h = h_n, hm = h_{n-1}; h_n' = sqrt(n) h_{n-1} - x h_n / 2
      double dh = std::sqrt(double(n)) * hm - 0.5 * x * h;
      if (dh == 0.0) break;
      double dx = h / dh;
      if (!std::isfinite(dx) || std::abs(dx) > 1e-6) break;
      x -= dx;
    }
    double sum = 0.0, hm = 0.0, h = e0 * std::exp(-0.25 * x * x);
    for (int k = 0; k < n; ++k) {
      sum += h * h;
      double hp = (x * h - std::sqrt(double(k)) * hm) / std::sqrt(double(k + 1));
      hm = h;
      h = hp;
    }
    rule.nodes[i] = x;
    rule.scaled[i] = 1.0 / sum;
    rule.weights[i] = rule.scaled[i] * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  return rule;
}

}  // namespace vpfp
