#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "cwgp/errors.hpp"
#include "cwgp/math_util.hpp"

namespace cwgp {

// k-point rule for integrals against exp(-x^2): nodes are the Hermite
// roots, sum of weights is sqrt(pi).
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int order = 0;
};

// Golub-Welsch construction via the symmetric tridiagonal Jacobi matrix;
// stable for k up to 100 without tabulated values.
GaussHermiteRule gh_rule(int k);

// E[h(y)] for y = phi^{-1}(x), x ~ N(m, sigma^2), with g = h o phi^{-1}
// supplied by the caller:
//   (1/sqrt(pi)) sum_i w_i g(sqrt(2) sigma x_i + m).
// sigma == 0 collapses to g(m) for every rule order.
template <class G>
double expect_warped(G&& g, double m, double sigma, const GaussHermiteRule& rule) {
  if (sigma < 0.0) throw DomainError("expect_warped: sigma must be >= 0");
  if (sigma == 0.0) return g(m);
  double acc = 0.0;
  const double scale = M_SQRT2 * sigma;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * g(scale * rule.nodes[i] + m);
  }
  return acc / kSqrtPi;
}

}  // namespace cwgp
