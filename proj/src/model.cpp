#include "cwgp/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "cwgp/math_util.hpp"
#include "cwgp/rng.hpp"

namespace cwgp {

Vector WarpedGpModel::get_params() const {
  Vector theta(trainable_count());
  int i = 0;
  if (mean.trainable) theta[i++] = mean.value;
  if (kernel.trainable) {
    kernel.get_params(theta.data() + i);
    i += kernel.param_count();
  }
  if (noise_trainable) theta[i++] = log_noise_var;
  const Vector phi = warping.get_trainable();
  theta.segment(i, phi.size()) = phi;
  return theta;
}

void WarpedGpModel::set_params(const Vector& theta) {
  if (theta.size() != trainable_count()) {
    throw DimensionMismatch("WarpedGpModel::set_params: size mismatch");
  }
  int i = 0;
  if (mean.trainable) mean.value = theta[i++];
  if (kernel.trainable) {
    kernel.set_params(theta.data() + i);
    i += kernel.param_count();
  }
  if (noise_trainable) log_noise_var = theta[i++];
  warping.set_trainable(theta.tail(theta.size() - i));
}

namespace {

double nll_impl(const WarpedGpModel& model, const Matrix& gram_train,
                const Vector& targets) {
  const Eigen::Index n = targets.size();
  Vector latents(n);
  double log_deriv_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    latents[i] = model.warping.forward(targets[i]);
    log_deriv_sum += model.warping.log_derivative(targets[i]);
  }

  Matrix k = gram_train;
  k.diagonal().array() += model.noise_var();
  const CholeskyFactor chol = cholesky_with_jitter(k);

  const Vector resid = latents.array() - model.mean.value;
  const Vector z = chol.solve_lower(resid);
  return 0.5 * (static_cast<double>(n) * kLog2Pi + chol.log_det() + z.squaredNorm()) -
         log_deriv_sum;
}

}  // namespace

double nll(const WarpedGpModel& model, const Matrix& inputs, const Vector& targets) {
  if (inputs.rows() != targets.size()) {
    throw DimensionMismatch("nll: inputs/targets size mismatch");
  }
  return nll_impl(model, gram(model.kernel, inputs, inputs), targets);
}

double nll(const WarpedGpModel& model, const PairwiseSqDists& dists,
           const Vector& targets) {
  if (dists.rows != targets.size() || dists.rows != dists.cols) {
    throw DimensionMismatch("nll: distance cache does not match targets");
  }
  return nll_impl(model, gram(model.kernel, dists), targets);
}

FittedCache fit_cache(const WarpedGpModel& model, const Matrix& inputs,
                      const Vector& targets) {
  if (inputs.rows() != targets.size()) {
    throw DimensionMismatch("fit_cache: inputs/targets size mismatch");
  }
  FittedCache cache;
  cache.train_inputs = inputs;
  cache.train_targets_raw = targets;

  const Eigen::Index n = targets.size();
  cache.train_latents.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cache.train_latents[i] = model.warping.forward(targets[i]);
  }

  if (n == 0) return cache;

  Matrix k = gram(model.kernel, inputs, inputs);
  k.diagonal().array() += model.noise_var();
  cache.chol = cholesky_with_jitter(k);
  cache.alpha = cache.chol.solve(Vector(cache.train_latents.array() - model.mean.value));
  return cache;
}

LatentPosterior latent_posterior(const WarpedGpModel& model, const FittedCache& cache,
                                 const Matrix& test_inputs, bool include_noise) {
  const Eigen::Index m = test_inputs.rows();
  LatentPosterior post;
  post.mean.resize(m);
  post.sd.resize(m);

  const double noise = include_noise ? model.noise_var() : 0.0;
  const double prior_diag = model.kernel.diagonal_value();

  if (cache.empty()) {
    post.mean.setConstant(model.mean.value);
    post.sd.setConstant(std::sqrt(prior_diag + noise));
    return post;
  }

  const Matrix kts = gram(model.kernel, cache.train_inputs, test_inputs);
  post.mean = kts.transpose() * cache.alpha;
  post.mean.array() += model.mean.value;

  const Matrix v = cache.chol.solve_lower(kts);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double var_f = std::max(0.0, prior_diag - v.col(i).squaredNorm());
    post.sd[i] = std::sqrt(var_f + noise);
  }
  return post;
}

PredictionSummary predict_from_latent(const CompositeWarping& warping,
                                      const LatentPosterior& post,
                                      const PredictOptions& opts) {
  if (!(opts.percentile >= 0.5 && opts.percentile < 1.0)) {
    throw InvalidParameter("predict: percentile must lie in [0.5, 1)");
  }
  const Eigen::Index m = post.mean.size();
  const double z_p = normal_quantile(opts.percentile);
  const GaussHermiteRule rule = gh_rule(opts.gh_order);
  const bool closed_form = warping.has_closed_form_inverse();

  PredictionSummary out;
  out.median.resize(m);
  out.gh_mean.resize(m);
  out.lower.resize(m);
  out.upper.resize(m);
  out.latent_mean = post.mean;
  out.latent_sd = post.sd;

  auto invert = [&](double x) {
    if (closed_form) return warping.inverse(x);
    const NumericInverseResult r =
        numeric_inverse(warping, x, opts.nrm_tol, opts.nrm_max_iter);
    out.nrm_iterations += r.iterations;
    ++out.nrm_invocations;
    return r.value;
  };

  for (Eigen::Index i = 0; i < m; ++i) {
    const double mu = post.mean[i];
    const double sd = post.sd[i];
    out.median[i] = invert(mu);
    out.lower[i] = invert(mu - z_p * sd);
    out.upper[i] = invert(mu + z_p * sd);
    out.gh_mean[i] = expect_warped([&](double x) { return invert(x); }, mu, sd, rule);
  }
  return out;
}

PredictionSummary predict(const WarpedGpModel& model, const FittedCache& cache,
                          const Matrix& test_inputs, const PredictOptions& opts,
                          const Vector* test_targets) {
  const LatentPosterior post =
      latent_posterior(model, cache, test_inputs, opts.include_noise);
  PredictionSummary out = predict_from_latent(model.warping, post, opts);

  if (test_targets != nullptr) {
    if (test_targets->size() != test_inputs.rows()) {
      throw DimensionMismatch("predict: test targets size mismatch");
    }
    Vector ld(test_targets->size());
    for (Eigen::Index i = 0; i < test_targets->size(); ++i) {
      const double y = (*test_targets)[i];
      const double x = model.warping.forward(y);
      const double var = post.sd[i] * post.sd[i];
      ld[i] = model.warping.log_derivative(y) + normal_logpdf(x, post.mean[i], var);
    }
    out.log_density = std::move(ld);
  }
  return out;
}

namespace {

// Factor of a PSD matrix for sampling: Cholesky when it succeeds, else an
// eigen-decomposition with negative eigenvalues clamped to zero (exact
// posteriors can be singular).
Matrix sampling_factor(const Matrix& cov) {
  try {
    return cholesky_with_jitter(cov, JitterPolicy{{0.0, 1e-12, 1e-10}}).lower();
  } catch (const FactorizationFailed&) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) {
      throw FactorizationFailed("sample: eigen-decomposition of posterior failed");
    }
    const Vector lam = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * lam.asDiagonal();
  }
}

}  // namespace

Matrix sample(const WarpedGpModel& model, const FittedCache& cache,
              const Matrix& test_inputs, int n_paths, std::uint64_t seed) {
  if (n_paths < 1) throw InvalidParameter("sample: n_paths must be >= 1");
  const Eigen::Index m = test_inputs.rows();

  auto kernel_fn = [&](const Matrix& a, const Matrix& b) { return gram(model.kernel, a, b); };
  auto mean_fn = [&](const Matrix& a) { return model.mean(a); };

  const GaussianPosterior post =
      gp_condition(cache.train_inputs, cache.empty() ? Vector(0) : cache.train_latents,
                   test_inputs, kernel_fn, mean_fn, model.noise_var(),
                   PosteriorForm::FullCovariance);

  const Matrix factor = sampling_factor(post.cov);
  const bool closed_form = model.warping.has_closed_form_inverse();

  Rng rng(seed);
  Matrix paths(n_paths, m);
  for (int p = 0; p < n_paths; ++p) {
    const Vector z = rng.normal_vector(m);
    const Vector latent = post.mean + factor * z;
    for (Eigen::Index i = 0; i < m; ++i) {
      paths(p, i) = closed_form ? model.warping.inverse(latent[i])
                                : numeric_inverse(model.warping, latent[i]).value;
    }
  }
  return paths;
}

ShapeDiagnostics shape_diagnostics(const CompositeWarping& warping, double m_x,
                                   double sigma_x) {
  if (warping.depth() != 1) {
    throw UnsupportedVariant("shape_diagnostics: single elementary warping required");
  }
  const ElementaryWarping& w = warping.layers()[0];
  const double var_x = sigma_x * sigma_x;
  ShapeDiagnostics out;

  const bool is_log = w.variant() == WarpingVariant::Log ||
                      (w.variant() == WarpingVariant::BoxCox && w.param_count() == 0);
  if (is_log) {
    // Lognormal moments: E[y^n] = exp(n m + n^2 var / 2).
    const double m1 = std::exp(m_x + 0.5 * var_x);
    const double m2 = std::exp(2.0 * m_x + 2.0 * var_x);
    out.mean = m1;
    out.variance = m2 - m1 * m1;
    return out;
  }

  if (w.variant() == WarpingVariant::BoxCox) {
    const double lambda = w.natural_param(0);
    const double one_plus = 1.0 + lambda * m_x;
    const double disc = one_plus * one_plus + 4.0 * var_x * lambda * (lambda - 1.0);
    if (disc >= 0.0) {
      const double u = 0.5 * (one_plus + std::sqrt(disc));
      if (u > 0.0) out.mode = std::pow(u, 1.0 / lambda);
    }
    return out;
  }

  if (w.variant() == WarpingVariant::Arcsinh) {
    // y = c + d sinh((x - a)/b) with x ~ N(m, s^2): Johnson-SU moments
    // (the textbook forms are the m = 0, s = 1 case).
    const double a = w.natural_param(0), b = w.natural_param(1);
    const double c = w.natural_param(2), d = w.natural_param(3);
    const double mu_z = (m_x - a) / b;
    const double s2_z = var_x / (b * b);
    const double e_sinh = std::sinh(mu_z) * std::exp(0.5 * s2_z);
    const double e_sinh2 =
        0.5 * (std::cosh(2.0 * mu_z) * std::exp(2.0 * s2_z) - 1.0);
    out.mean = c + d * e_sinh;
    out.variance = d * d * (e_sinh2 - e_sinh * e_sinh);
    return out;
  }

  throw UnsupportedVariant("shape_diagnostics: variant must be BoxCox, Arcsinh or Log");
}

}  // namespace cwgp
