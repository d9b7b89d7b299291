#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwgp/model.hpp"
#include "cwgp/optimize.hpp"

namespace cwgp {

enum class OptimizerKind { Bfgs, Powell, Both };
enum class Selection { ValidationRmse, Nll };

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::Bfgs;
  int max_iters = 500;
  double grad_step = 1e-6;
  double grad_tol = 1e-6;
  double rel_tol = 1e-9;
  int n_random_starts = 3;
  std::uint64_t seed = 0;
  Selection selection = Selection::ValidationRmse;
  bool parallel_starts = true;
  // Extra warm starts appended after the six protocol starts (used by the
  // depth sweeps to chain from the previous depth's winner).
  std::vector<Vector> extra_starts;
};

struct StartRecord {
  std::string kind;
  bool skipped = false;
  std::string skip_reason;
  double initial_nll = 0.0;
  double final_nll = 0.0;
  double validation_rmse = 0.0;
  int iterations = 0;
  int function_evals = 0;
  double wall_s = 0.0;
  bool line_search_failed = false;
  Vector params;
};

struct TrainReport {
  WarpedGpModel model;  // template with the winning parameters applied
  Vector best_params;
  double best_nll = 0.0;
  double best_validation_rmse = 0.0;
  int winner_index = -1;
  std::string selection_criterion;
  std::vector<StartRecord> starts;
};

// The six-start protocol: a data-independent default, a data-derived
// start, a prelearned start copied from a fitted plain GP, and three
// seeded random perturbations of the data-derived start. The winner is
// picked by validation RMSE of the predictive median (ties by lower NLL,
// then lower start index) or by NLL when no validation set is supplied.
TrainReport multi_start_train(const WarpedGpModel& model_template,
                              const Matrix& train_inputs, const Vector& train_targets,
                              const Matrix& validation_inputs,
                              const Vector& validation_targets, const TrainConfig& config);

// Identity-reverting parameter values for every layer that supports them
// (affine, sinh-arcsinh, Box-Cox); other variants keep their values.
void revert_layers_to_identity(CompositeWarping& warping);

}  // namespace cwgp
