#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "cwgp/errors.hpp"

namespace cwgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Additive diagonal loading, tried in order as multiples of the mean
// diagonal of the matrix being factored.
struct JitterPolicy {
  std::vector<double> multipliers{0.0, 1e-10, 1e-8, 1e-6, 1e-4};
};

// Lower-triangular Cholesky factor of an SPD matrix plus the jitter that
// made the factorization succeed. Immutable once built; safe to share.
class CholeskyFactor {
 public:
  CholeskyFactor(Matrix lower, double log_det, double jitter_used)
      : lower_(std::move(lower)), log_det_(log_det), jitter_used_(jitter_used) {}

  const Matrix& lower() const { return lower_; }
  double log_det() const { return log_det_; }
  double jitter_used() const { return jitter_used_; }
  Eigen::Index size() const { return lower_.rows(); }

  // L y = b
  Vector solve_lower(const Vector& b) const {
    return lower_.triangularView<Eigen::Lower>().solve(b);
  }
  Matrix solve_lower(const Matrix& b) const {
    return lower_.triangularView<Eigen::Lower>().solve(b);
  }

  // (L L^T)^{-1} b
  Vector solve(const Vector& b) const {
    Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
  }
  Matrix solve(const Matrix& b) const {
    Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
  }

 private:
  Matrix lower_;
  double log_det_;
  double jitter_used_;
};

// Factorizes mat + jitter*I with the smallest jitter from the policy that
// succeeds. Throws FactorizationFailed when every level fails.
CholeskyFactor cholesky_with_jitter(const Matrix& mat, const JitterPolicy& policy = {});

// Multivariate normal log-density evaluated through a Cholesky factor of
// the covariance.
double mvn_logpdf(const Vector& x, const Vector& mean, const CholeskyFactor& chol);

// Posterior of a GP at test inputs. `cov` is populated only when the full
// joint is requested; `var` always holds the (clamped, non-negative)
// marginal variances.
struct GaussianPosterior {
  Vector mean;
  Vector var;
  Matrix cov;
  bool has_cov = false;
};

enum class PosteriorForm { Marginals, FullCovariance };

// Exact GP conditioning. `kernel(A, B)` must return the cross-Gram matrix
// of two input sets (rows are points) and `mean_fn(A)` the mean vector.
// An empty training set yields the prior.
template <class KernelGram, class MeanFn>
GaussianPosterior gp_condition(const Matrix& train_inputs, const Vector& train_latents,
                               const Matrix& test_inputs, KernelGram&& kernel,
                               MeanFn&& mean_fn, double noise_var,
                               PosteriorForm form = PosteriorForm::Marginals,
                               const JitterPolicy& policy = {}) {
  if (train_inputs.rows() != train_latents.size()) {
    throw DimensionMismatch("gp_condition: train inputs/latents size mismatch");
  }
  const Eigen::Index n = train_inputs.rows();
  const Eigen::Index m = test_inputs.rows();

  // Prior marginal variances without materializing the m x m Gram.
  auto prior_diag = [&]() {
    Vector d(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Matrix row = test_inputs.row(i);
      d[i] = kernel(row, row)(0, 0);
    }
    return d;
  };

  GaussianPosterior post;
  if (n == 0) {
    post.mean = mean_fn(test_inputs);
    if (form == PosteriorForm::FullCovariance) {
      post.cov = kernel(test_inputs, test_inputs);
      post.var = post.cov.diagonal().cwiseMax(0.0);
      post.has_cov = true;
    } else {
      post.var = prior_diag().cwiseMax(0.0);
    }
    return post;
  }

  Matrix ktt = kernel(train_inputs, train_inputs);
  ktt.diagonal().array() += noise_var;
  const CholeskyFactor chol = cholesky_with_jitter(ktt, policy);

  const Matrix kts = kernel(train_inputs, test_inputs);  // n x m
  const Vector resid = train_latents - mean_fn(train_inputs);
  const Vector alpha = chol.solve(resid);

  post.mean = mean_fn(test_inputs) + kts.transpose() * alpha;

  const Matrix v = chol.solve_lower(kts);  // n x m
  if (form == PosteriorForm::FullCovariance) {
    post.cov = kernel(test_inputs, test_inputs) - v.transpose() * v;
    post.var = post.cov.diagonal().cwiseMax(0.0);
    post.has_cov = true;
  } else {
    post.var =
        (prior_diag() - v.colwise().squaredNorm().transpose().eval()).cwiseMax(0.0);
  }
  return post;
}

}  // namespace cwgp
