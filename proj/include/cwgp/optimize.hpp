#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

#include "cwgp/errors.hpp"

namespace cwgp {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimOptions {
  int max_iters = 500;
  double grad_step = 1e-6;  // relative central-difference step
  double grad_tol = 1e-6;   // infinity norm of the gradient
  double rel_tol = 1e-9;    // relative improvement per iteration
};

struct OptimTrace {
  int iterations = 0;
  int function_evals = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::string stop_reason;
};

struct OptimResult {
  Eigen::VectorXd theta;
  double value = 0.0;
  OptimTrace trace;
};

// Central differences with per-coordinate step step*max(1, |theta_i|).
Eigen::VectorXd finite_diff_grad(const Objective& f, const Eigen::VectorXd& theta,
                                 double step);

// Quasi-Newton BFGS with an Armijo backtracking line search. A failed
// line search stops the run and returns the best iterate, flagged.
OptimResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& theta0,
                          const OptimOptions& opts = {});

// Powell's direction-set method with Brent line minimizations; never
// evaluates gradients. Hitting max_iters returns the best iterate.
OptimResult powell_minimize(const Objective& f, const Eigen::VectorXd& theta0,
                            const OptimOptions& opts = {});

}  // namespace cwgp
