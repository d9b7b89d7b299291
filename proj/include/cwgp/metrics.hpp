#pragma once

#include <Eigen/Dense>

#include "cwgp/errors.hpp"

namespace cwgp {

// Performance indices for one train/evaluate pass.
struct EvalResult {
  double rmse = 0.0;
  double mae = 0.0;
  double nlpd = 0.0;
  double nll = 0.0;
  long n = 0;
  double train_s = 0.0;
  double eval_s = 0.0;
};

inline double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size()) throw DimensionMismatch("rmse: length mismatch");
  if (y.size() == 0) throw DimensionMismatch("rmse: empty input");
  return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

inline double mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size()) throw DimensionMismatch("mae: length mismatch");
  if (y.size() == 0) throw DimensionMismatch("mae: empty input");
  return (y - y_hat).cwiseAbs().mean();
}

// Negative mean of per-point log predictive densities.
inline double nlpd(const Eigen::VectorXd& log_densities) {
  if (log_densities.size() == 0) throw DimensionMismatch("nlpd: empty input");
  return -log_densities.mean();
}

}  // namespace cwgp
