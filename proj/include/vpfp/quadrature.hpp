#pragma once

#include <vector>

namespace vpfp {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/** Gauss-Legendre rule with n points on [-1, 1]. */
QuadratureRule gauss_legendre(int n);

/**
 * Gauss-Hermite rule for the probabilists' weight M(x) = exp(-x^2/2)/sqrt(2 pi).
 * weights[i] integrates against M (they sum to one); scaled[i] = weights[i]/M(x_i)
 * integrates plain functions, sum_i scaled[i] g(x_i) ~ int g dx.
 */
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled;
};

HermiteRule gauss_hermite(int n);

}  // namespace vpfp
