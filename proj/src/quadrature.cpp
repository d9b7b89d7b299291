#include "cwgp/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace cwgp {

GaussHermiteRule gh_rule(int k) {
  if (k < 1 || k > 100) throw InvalidOrder("gh_rule: order must be in [1, 100]");

  GaussHermiteRule rule;
  rule.order = k;
  if (k == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, kSqrtPi);
    return rule;
  }

  // Jacobi matrix for the (physicists') Hermite polynomials: zero diagonal,
  // off-diagonal beta_i = sqrt(i/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) {
    const double beta = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw FactorizationFailed("gh_rule: Jacobi eigen-decomposition failed");
  }

  Eigen::VectorXd nodes = solver.eigenvalues();
  Eigen::VectorXd weights(k);
  for (int i = 0; i < k; ++i) {
    const double q0 = solver.eigenvectors()(0, i);
    weights[i] = kSqrtPi * q0 * q0;
  }

  // Eigenvalues come out sorted; symmetrize pairs so nodes are exactly
  // mirrored and weights exactly matched.
  for (int i = 0, j = k - 1; i < j; ++i, --j) {
    const double node = 0.5 * (nodes[j] - nodes[i]);
    nodes[i] = -node;
    nodes[j] = node;
    const double w = 0.5 * (weights[i] + weights[j]);
    weights[i] = w;
    weights[j] = w;
  }
  if (k % 2 == 1) nodes[k / 2] = 0.0;

  rule.nodes = std::move(nodes);
  rule.weights = std::move(weights);
  return rule;
}

}  // namespace cwgp
