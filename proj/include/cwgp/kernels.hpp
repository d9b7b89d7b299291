#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cwgp/errors.hpp"
#include "cwgp/gaussian.hpp"

namespace cwgp {

enum class KernelVariant { SquaredExponential, ArdSquaredExponential, SpectralMixture };

// Stationary covariance function. Positive hyperparameters are stored as
// logs so the trainable view is unconstrained and round-trips bit-exactly.
struct KernelSpec {
  KernelVariant variant = KernelVariant::SquaredExponential;

  // SE / ARD-SE
  double log_variance = 0.0;
  Vector log_lengthscales;  // size 1 (SE) or D (ARD)

  // Spectral mixture, 1-D inputs only:
  //   k(tau) = sum_q w_q * exp(-2 pi^2 tau^2 v_q) * cos(2 pi mu_q tau)
  // with mu_q in cycles per input unit (not angular frequency).
  Vector log_weights, log_frequencies, log_bandwidths;

  bool trainable = true;

  static KernelSpec se(double variance, double lengthscale);
  static KernelSpec ard_se(double variance, const Vector& lengthscales);
  static KernelSpec spectral_mixture(const Vector& weights, const Vector& frequencies,
                                     const Vector& bandwidths);

  double variance() const { return std::exp(log_variance); }
  Vector lengthscales() const { return log_lengthscales.array().exp(); }
  int num_components() const { return static_cast<int>(log_weights.size()); }

  // Prior variance k(t, t).
  double diagonal_value() const;

  int param_count() const;
  int trainable_count() const { return trainable ? param_count() : 0; }
  void get_params(double* out) const;
  void set_params(const double* in);
};

// Constant mean function.
struct MeanSpec {
  double value = 0.0;
  bool trainable = true;

  Vector operator()(const Matrix& inputs) const {
    return Vector::Constant(inputs.rows(), value);
  }
};

double kernel_eval(const KernelSpec& spec, const Vector& t, const Vector& t_prime);

Matrix gram(const KernelSpec& spec, const Matrix& inputs_a, const Matrix& inputs_b);

// Per-dimension squared differences (and signed 1-D differences for the
// spectral mixture), precomputed once so hyperparameter sweeps over the
// same inputs skip the O(n^2 D) distance work.
struct PairwiseSqDists {
  std::vector<Matrix> per_dim;  // squared differences, one matrix per column
  Matrix signed_diff;           // a_i - b_j, populated for 1-D inputs
  Eigen::Index rows = 0, cols = 0, dims = 0;

  static PairwiseSqDists build(const Matrix& inputs_a, const Matrix& inputs_b);
  static PairwiseSqDists build(const Matrix& inputs) { return build(inputs, inputs); }
};

Matrix gram(const KernelSpec& spec, const PairwiseSqDists& dists);

}  // namespace cwgp
