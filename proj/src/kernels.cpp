#include "cwgp/kernels.hpp"

#include <cmath>

namespace cwgp {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidParameter(std::string(what) + " must be positive");
}

}  // namespace

KernelSpec KernelSpec::se(double variance, double lengthscale) {
  require_positive(variance, "SE variance");
  require_positive(lengthscale, "SE lengthscale");
  KernelSpec k;
  k.variant = KernelVariant::SquaredExponential;
  k.log_variance = std::log(variance);
  k.log_lengthscales = Vector::Constant(1, std::log(lengthscale));
  return k;
}

KernelSpec KernelSpec::ard_se(double variance, const Vector& lengthscales) {
  require_positive(variance, "ARD-SE variance");
  if (lengthscales.size() < 1) throw InvalidParameter("ARD-SE needs >= 1 lengthscale");
  KernelSpec k;
  k.variant = KernelVariant::ArdSquaredExponential;
  k.log_variance = std::log(variance);
  k.log_lengthscales.resize(lengthscales.size());
  for (Eigen::Index d = 0; d < lengthscales.size(); ++d) {
    require_positive(lengthscales[d], "ARD-SE lengthscale");
    k.log_lengthscales[d] = std::log(lengthscales[d]);
  }
  return k;
}

KernelSpec KernelSpec::spectral_mixture(const Vector& weights, const Vector& frequencies,
                                        const Vector& bandwidths) {
  const Eigen::Index q = weights.size();
  if (q < 1 || frequencies.size() != q || bandwidths.size() != q) {
    throw InvalidParameter("spectral mixture needs equal-length w/mu/v with Q >= 1");
  }
  KernelSpec k;
  k.variant = KernelVariant::SpectralMixture;
  k.log_weights.resize(q);
  k.log_frequencies.resize(q);
  k.log_bandwidths.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    require_positive(weights[i], "SM weight");
    require_positive(frequencies[i], "SM frequency");
    require_positive(bandwidths[i], "SM bandwidth");
    k.log_weights[i] = std::log(weights[i]);
    k.log_frequencies[i] = std::log(frequencies[i]);
    k.log_bandwidths[i] = std::log(bandwidths[i]);
  }
  return k;
}

double KernelSpec::diagonal_value() const {
  if (variant == KernelVariant::SpectralMixture) {
    return log_weights.array().exp().sum();
  }
  return variance();
}

int KernelSpec::param_count() const {
  switch (variant) {
    case KernelVariant::SquaredExponential:
    case KernelVariant::ArdSquaredExponential:
      return 1 + static_cast<int>(log_lengthscales.size());
    case KernelVariant::SpectralMixture:
      return 3 * static_cast<int>(log_weights.size());
  }
  return 0;
}

void KernelSpec::get_params(double* out) const {
  int i = 0;
  if (variant == KernelVariant::SpectralMixture) {
    for (Eigen::Index q = 0; q < log_weights.size(); ++q) {
      out[i++] = log_weights[q];
      out[i++] = log_frequencies[q];
      out[i++] = log_bandwidths[q];
    }
  } else {
    out[i++] = log_variance;
    for (Eigen::Index d = 0; d < log_lengthscales.size(); ++d) {
      out[i++] = log_lengthscales[d];
    }
  }
}

void KernelSpec::set_params(const double* in) {
  int i = 0;
  if (variant == KernelVariant::SpectralMixture) {
    for (Eigen::Index q = 0; q < log_weights.size(); ++q) {
      log_weights[q] = in[i++];
      log_frequencies[q] = in[i++];
      log_bandwidths[q] = in[i++];
    }
  } else {
    log_variance = in[i++];
    for (Eigen::Index d = 0; d < log_lengthscales.size(); ++d) {
      log_lengthscales[d] = in[i++];
    }
  }
}

double kernel_eval(const KernelSpec& spec, const Vector& t, const Vector& t_prime) {
  if (t.size() != t_prime.size()) {
    throw DimensionMismatch("kernel_eval: input dimension mismatch");
  }
  switch (spec.variant) {
    case KernelVariant::SquaredExponential: {
      const double inv_ls2 = std::exp(-2.0 * spec.log_lengthscales[0]);
      return spec.variance() * std::exp(-0.5 * (t - t_prime).squaredNorm() * inv_ls2);
    }
    case KernelVariant::ArdSquaredExponential: {
      if (t.size() != spec.log_lengthscales.size()) {
        throw DimensionMismatch("kernel_eval: ARD lengthscale count != input dimension");
      }
      double s = 0.0;
      for (Eigen::Index d = 0; d < t.size(); ++d) {
        const double delta = (t[d] - t_prime[d]) * std::exp(-spec.log_lengthscales[d]);
        s += delta * delta;
      }
      return spec.variance() * std::exp(-0.5 * s);
    }
    case KernelVariant::SpectralMixture: {
      if (t.size() != 1) {
        throw DimensionMismatch("kernel_eval: spectral mixture requires 1-D inputs");
      }
      const double tau = t[0] - t_prime[0];
      const double tau2 = tau * tau;
      double s = 0.0;
      for (Eigen::Index q = 0; q < spec.log_weights.size(); ++q) {
        const double w = std::exp(spec.log_weights[q]);
        const double mu = std::exp(spec.log_frequencies[q]);
        const double v = std::exp(spec.log_bandwidths[q]);
        s += w * std::exp(-2.0 * M_PI * M_PI * tau2 * v) * std::cos(2.0 * M_PI * mu * tau);
      }
      return s;
    }
  }
  throw UnsupportedVariant("kernel_eval: unknown kernel variant");
}

PairwiseSqDists PairwiseSqDists::build(const Matrix& inputs_a, const Matrix& inputs_b) {
  if (inputs_a.cols() != inputs_b.cols()) {
    throw DimensionMismatch("PairwiseSqDists: column counts differ");
  }
  PairwiseSqDists out;
  out.rows = inputs_a.rows();
  out.cols = inputs_b.rows();
  out.dims = inputs_a.cols();
  out.per_dim.reserve(out.dims);
  for (Eigen::Index d = 0; d < out.dims; ++d) {
    Matrix diff = inputs_a.col(d).replicate(1, out.cols) -
                  inputs_b.col(d).transpose().replicate(out.rows, 1);
    if (out.dims == 1) out.signed_diff = diff;
    out.per_dim.push_back(diff.array().square().matrix());
  }
  return out;
}

Matrix gram(const KernelSpec& spec, const PairwiseSqDists& dists) {
  switch (spec.variant) {
    case KernelVariant::SquaredExponential: {
      const double inv_ls2 = std::exp(-2.0 * spec.log_lengthscales[0]);
      Matrix acc = Matrix::Zero(dists.rows, dists.cols);
      for (const Matrix& d2 : dists.per_dim) acc += d2;
      return spec.variance() * (-0.5 * inv_ls2 * acc.array()).exp().matrix();
    }
    case KernelVariant::ArdSquaredExponential: {
      if (dists.dims != spec.log_lengthscales.size()) {
        throw DimensionMismatch("gram: ARD lengthscale count != input dimension");
      }
      Matrix acc = Matrix::Zero(dists.rows, dists.cols);
      for (Eigen::Index d = 0; d < dists.dims; ++d) {
        acc += std::exp(-2.0 * spec.log_lengthscales[d]) * dists.per_dim[d];
      }
      return spec.variance() * (-0.5 * acc.array()).exp().matrix();
    }
    case KernelVariant::SpectralMixture: {
      if (dists.dims != 1) {
        throw DimensionMismatch("gram: spectral mixture requires 1-D inputs");
      }
      const auto& tau = dists.signed_diff.array();
      const auto& tau2 = dists.per_dim[0].array();
      Matrix acc = Matrix::Zero(dists.rows, dists.cols);
      for (Eigen::Index q = 0; q < spec.log_weights.size(); ++q) {
        const double w = std::exp(spec.log_weights[q]);
        const double mu = std::exp(spec.log_frequencies[q]);
        const double v = std::exp(spec.log_bandwidths[q]);
        acc.array() +=
            w * (-2.0 * M_PI * M_PI * v * tau2).exp() * (2.0 * M_PI * mu * tau).cos();
      }
      return acc;
    }
  }
  throw UnsupportedVariant("gram: unknown kernel variant");
}

Matrix gram(const KernelSpec& spec, const Matrix& inputs_a, const Matrix& inputs_b) {
  return gram(spec, PairwiseSqDists::build(inputs_a, inputs_b));
}

}  // namespace cwgp
