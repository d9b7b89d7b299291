#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "cwgp/errors.hpp"

namespace cwgp {

using Vector = Eigen::VectorXd;

enum class WarpingVariant { Affine, Log, Arcsinh, BoxCox, SinhArcsinh, TanhMix };

std::string to_string(WarpingVariant v);
WarpingVariant warping_variant_from_string(const std::string& name);

// One parametric strictly-increasing transform from observation space to
// latent space. Positive parameters are stored as logs so the trainable
// view is unconstrained; accessors expose natural-scale values.
//
//   affine        a + b*y
//   log           log(y), y > 0
//   arcsinh       a + b*asinh((y - c)/d)
//   box_cox       (sgn(y)|y|^l - 1)/l, l >= 0 (l = 0 is the log)
//   sinh_arcsinh  sinh(b*asinh(y) - a)
//   tanh_mix      y + sum_j a_j tanh(b_j (y + c_j))
class ElementaryWarping {
 public:
  static ElementaryWarping affine(double a, double b);
  // Affine with the scale log-parameterized (b > 0); used by SAL layers.
  static ElementaryWarping positive_affine(double a, double b);
  // Affine with b fixed at 1 ("shifted" in model codes).
  static ElementaryWarping shift(double a);
  static ElementaryWarping log();
  static ElementaryWarping arcsinh(double a, double b, double c, double d);
  // lambda == 0 selects the fixed logarithmic mode (no trainable params).
  static ElementaryWarping box_cox(double lambda);
  static ElementaryWarping sinh_arcsinh(double a, double b);
  static ElementaryWarping tanh_mix(const Vector& a, const Vector& b, const Vector& c);

  WarpingVariant variant() const { return variant_; }

  double forward(double y) const;
  double derivative(double y) const;
  double log_derivative(double y) const;

  bool has_closed_form_inverse() const;
  double inverse(double x) const;

  // Total stored scalar parameters (fixed ones included).
  int param_count() const { return static_cast<int>(params_.size()); }
  int trainable_count() const;

  // Unconstrained internal values, trainable entries only; order matches
  // the declared parameter order.
  void get_trainable(double* out) const;
  void set_trainable(const double* in);

  // Raw internal parameter access (serialization, reports).
  const std::vector<double>& internal_params() const { return params_; }
  const std::vector<std::uint8_t>& trainable_mask() const { return trainable_; }
  void set_trainable_mask(const std::vector<std::uint8_t>& mask);
  bool positive_scale() const { return positive_scale_; }

  std::vector<std::string> param_names() const;
  double natural_param(int i) const;          // natural-scale value
  void set_natural_param(int i, double value);

 private:
  ElementaryWarping(WarpingVariant v, std::vector<double> params,
                    std::vector<std::uint8_t> trainable, bool positive_scale = false)
      : variant_(v),
        params_(std::move(params)),
        trainable_(std::move(trainable)),
        positive_scale_(positive_scale) {}

  bool param_is_log(int i) const;

  WarpingVariant variant_;
  std::vector<double> params_;           // internal (log where positive)
  std::vector<std::uint8_t> trainable_;  // per-parameter flag
  bool positive_scale_ = false;          // affine only
};

// Ordered composition phi = phi_d o ... o phi_1, layers stored in
// application order (first applied at index 0). An empty composite is the
// identity map.
class CompositeWarping {
 public:
  CompositeWarping() = default;
  explicit CompositeWarping(std::vector<ElementaryWarping> layers)
      : layers_(std::move(layers)) {}

  const std::vector<ElementaryWarping>& layers() const { return layers_; }
  std::vector<ElementaryWarping>& layers() { return layers_; }
  bool empty() const { return layers_.empty(); }
  int depth() const { return static_cast<int>(layers_.size()); }
  void append(ElementaryWarping layer) { layers_.push_back(std::move(layer)); }

  int param_count() const;
  int trainable_count() const;
  Vector get_trainable() const;
  void set_trainable(const Vector& theta);

  double forward(double y) const;
  double derivative(double y) const;
  // Sum of layer log-derivatives along the chain; stable for deep stacks.
  double log_derivative(double y) const;

  bool has_closed_form_inverse() const;
  double inverse(double x) const;

  Vector forward(const Vector& y) const;
  Vector inverse(const Vector& x) const;

 private:
  std::vector<ElementaryWarping> layers_;
};

struct NumericInverseResult {
  double value = 0.0;
  int iterations = 0;  // bisection + Newton steps
  bool converged = false;
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

// Bisection-seeded Newton inversion of a strictly increasing warping.
// Throws NoConvergence when |forward(y) - x| > tol after max_iter Newton
// steps; the best bracket is reported in the exception message.
NumericInverseResult numeric_inverse(const CompositeWarping& w, double x,
                                     double tol = 1e-10, int max_iter = 100);
NumericInverseResult numeric_inverse(const ElementaryWarping& w, double x,
                                     double tol = 1e-10, int max_iter = 100);

// Box-Cox forward for lambda in [0, 1e-6]: dispatches to log(y) at
// lambda == 0 and stays continuous in lambda via the expm1 form.
double boxcox_limit_check(double lambda, double y);

// SinhArcsinh-then-affine layer l(y) = a + b*sinh(c*asinh(y) - d).
CompositeWarping sal_layer(double a, double b, double c, double d);

// Stack of `depth` SAL layers initialized at the identity.
CompositeWarping sal_stack(int depth);

}  // namespace cwgp
