#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "cwgp/gaussian.hpp"
#include "cwgp/kernels.hpp"
#include "cwgp/quadrature.hpp"
#include "cwgp/warpings.hpp"

namespace cwgp {

// Latent GP (mean, kernel, noise) plus a composite warping from
// observation to latent space. An empty warping is a plain GP.
struct WarpedGpModel {
  MeanSpec mean;
  KernelSpec kernel;
  double log_noise_var = std::log(0.1);  // -inf encodes exactly zero noise
  bool noise_trainable = true;
  CompositeWarping warping;

  double noise_var() const { return std::exp(log_noise_var); }
  void set_noise_var(double v) {
    if (v < 0.0) throw InvalidParameter("noise_var must be >= 0");
    log_noise_var = std::log(v);
  }

  int theta_x_count() const {
    return (mean.trainable ? 1 : 0) + kernel.trainable_count() + (noise_trainable ? 1 : 0);
  }
  int theta_phi_count() const { return warping.trainable_count(); }
  int trainable_count() const { return theta_x_count() + theta_phi_count(); }

  // Flattened theta = (theta_x, theta_phi); stored unconstrained values
  // are copied verbatim, so the round trip is bit-exact.
  Vector get_params() const;
  void set_params(const Vector& theta);
};

// One-time factorization of (K + noise*I) with everything prediction
// needs. Immutable after construction.
struct FittedCache {
  CholeskyFactor chol{Matrix(0, 0), 0.0, 0.0};
  Vector alpha;
  Matrix train_inputs;
  Vector train_targets_raw;
  Vector train_latents;

  bool empty() const { return train_inputs.rows() == 0; }
};

// Negative log marginal likelihood with the change-of-variables term:
//   n log(2pi)/2 + 1/2 r^T (K+s2 I)^{-1} r + 1/2 log|K+s2 I|
//   - sum_i log phi'(y_i),   r = phi(y) - mu.
double nll(const WarpedGpModel& model, const Matrix& inputs, const Vector& targets);

// Same value reusing precomputed pairwise distances (hyperparameter loops).
double nll(const WarpedGpModel& model, const PairwiseSqDists& dists, const Vector& targets);

FittedCache fit_cache(const WarpedGpModel& model, const Matrix& inputs,
                      const Vector& targets);

struct PredictOptions {
  double percentile = 0.975;
  int gh_order = 20;
  bool include_noise = true;  // observation-level intervals by default
  double nrm_tol = 1e-10;
  int nrm_max_iter = 100;
};

struct PredictionSummary {
  Vector median;
  Vector gh_mean;
  Vector lower, upper;
  Vector latent_mean, latent_sd;
  std::optional<Vector> log_density;
  long nrm_iterations = 0;  // total across all numeric inversions
  long nrm_invocations = 0; // 0 whenever the warping inverts in closed form
};

// Latent posterior marginals at a set of points; the sd already includes
// observation noise when requested.
struct LatentPosterior {
  Vector mean;
  Vector sd;
};

LatentPosterior latent_posterior(const WarpedGpModel& model, const FittedCache& cache,
                                 const Matrix& test_inputs, bool include_noise);

// Median, percentile interval and Gauss-Hermite mean pushed through the
// inverse warping, given latent marginals. This is the piece the timing
// harness exercises for closed-form vs numeric inversion.
PredictionSummary predict_from_latent(const CompositeWarping& warping,
                                      const LatentPosterior& post,
                                      const PredictOptions& opts);

PredictionSummary predict(const WarpedGpModel& model, const FittedCache& cache,
                          const Matrix& test_inputs, const PredictOptions& opts = {},
                          const Vector* test_targets = nullptr);

// Joint posterior (or prior) paths through the inverse warping,
// deterministic in the seed. Rows are paths.
Matrix sample(const WarpedGpModel& model, const FittedCache& cache,
              const Matrix& test_inputs, int n_paths, std::uint64_t seed);

// Closed-form push-forward shape summaries for single-layer warpings:
// Box-Cox mode, Johnson-SU mean/variance, lognormal mean/variance.
struct ShapeDiagnostics {
  std::optional<double> mode;
  std::optional<double> mean;
  std::optional<double> variance;
};

ShapeDiagnostics shape_diagnostics(const CompositeWarping& warping, double m_x,
                                   double sigma_x);

}  // namespace cwgp
