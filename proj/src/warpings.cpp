#include "cwgp/warpings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cwgp/math_util.hpp"

namespace cwgp {

namespace {

constexpr double kBoxCoxSingular = 1e-12;  // |y| below this is singular for lambda < 1
constexpr double kSmallLambda = 1e-3;      // switch to expm1 form

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string to_string(WarpingVariant v) {
  switch (v) {
    case WarpingVariant::Affine: return "affine";
    case WarpingVariant::Log: return "log";
    case WarpingVariant::Arcsinh: return "arcsinh";
    case WarpingVariant::BoxCox: return "boxcox";
    case WarpingVariant::SinhArcsinh: return "sinharcsinh";
    case WarpingVariant::TanhMix: return "tanhmix";
  }
  return "unknown";
}

WarpingVariant warping_variant_from_string(const std::string& name) {
  if (name == "affine") return WarpingVariant::Affine;
  if (name == "shift") return WarpingVariant::Affine;
  if (name == "log") return WarpingVariant::Log;
  if (name == "arcsinh") return WarpingVariant::Arcsinh;
  if (name == "boxcox") return WarpingVariant::BoxCox;
  if (name == "sinharcsinh") return WarpingVariant::SinhArcsinh;
  if (name == "tanhmix") return WarpingVariant::TanhMix;
  throw UnsupportedVariant("unknown warping variant: " + name);
}

ElementaryWarping ElementaryWarping::affine(double a, double b) {
  if (b == 0.0) throw InvalidParameter("affine: scale b must be nonzero");
  return ElementaryWarping(WarpingVariant::Affine, {a, b}, {1, 1}, false);
}

ElementaryWarping ElementaryWarping::positive_affine(double a, double b) {
  if (!(b > 0.0)) throw InvalidParameter("positive_affine: scale b must be > 0");
  return ElementaryWarping(WarpingVariant::Affine, {a, std::log(b)}, {1, 1}, true);
}

ElementaryWarping ElementaryWarping::shift(double a) {
  return ElementaryWarping(WarpingVariant::Affine, {a, 1.0}, {1, 0}, false);
}

ElementaryWarping ElementaryWarping::log() {
  return ElementaryWarping(WarpingVariant::Log, {}, {});
}

ElementaryWarping ElementaryWarping::arcsinh(double a, double b, double c, double d) {
  if (!(b > 0.0) || !(d > 0.0)) throw InvalidParameter("arcsinh: b and d must be > 0");
  return ElementaryWarping(WarpingVariant::Arcsinh, {a, std::log(b), c, std::log(d)},
                           {1, 1, 1, 1});
}

ElementaryWarping ElementaryWarping::box_cox(double lambda) {
  if (lambda < 0.0) throw InvalidParameter("box_cox: lambda must be >= 0");
  if (lambda == 0.0) {
    // Fixed logarithmic mode.
    return ElementaryWarping(WarpingVariant::BoxCox, {}, {});
  }
  return ElementaryWarping(WarpingVariant::BoxCox, {std::log(lambda)}, {1});
}

ElementaryWarping ElementaryWarping::sinh_arcsinh(double a, double b) {
  if (!(b > 0.0)) throw InvalidParameter("sinh_arcsinh: b must be > 0");
  return ElementaryWarping(WarpingVariant::SinhArcsinh, {a, std::log(b)}, {1, 1});
}

ElementaryWarping ElementaryWarping::tanh_mix(const Vector& a, const Vector& b,
                                              const Vector& c) {
  const Eigen::Index d = a.size();
  if (b.size() != d || c.size() != d) {
    throw InvalidParameter("tanh_mix: component vectors must have equal length");
  }
  std::vector<double> params;
  std::vector<std::uint8_t> mask;
  params.reserve(3 * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(a[j] > 0.0) || !(b[j] > 0.0)) {
      throw InvalidParameter("tanh_mix: a_j and b_j must be > 0");
    }
    params.push_back(std::log(a[j]));
    params.push_back(std::log(b[j]));
    params.push_back(c[j]);
    mask.insert(mask.end(), {1, 1, 1});
  }
  return ElementaryWarping(WarpingVariant::TanhMix, std::move(params), std::move(mask));
}

bool ElementaryWarping::param_is_log(int i) const {
  switch (variant_) {
    case WarpingVariant::Affine: return i == 1 && positive_scale_;
    case WarpingVariant::Log: return false;
    case WarpingVariant::Arcsinh: return i == 1 || i == 3;
    case WarpingVariant::BoxCox: return true;
    case WarpingVariant::SinhArcsinh: return i == 1;
    case WarpingVariant::TanhMix: return (i % 3) != 2;
  }
  return false;
}

double ElementaryWarping::natural_param(int i) const {
  const double v = params_.at(i);
  return param_is_log(i) ? std::exp(v) : v;
}

void ElementaryWarping::set_natural_param(int i, double value) {
  if (param_is_log(i)) {
    if (!(value > 0.0)) throw InvalidParameter("parameter must be positive");
    params_.at(i) = std::log(value);
  } else {
    params_.at(i) = value;
  }
}

std::vector<std::string> ElementaryWarping::param_names() const {
  switch (variant_) {
    case WarpingVariant::Affine: return {"a", "b"};
    case WarpingVariant::Log: return {};
    case WarpingVariant::Arcsinh: return {"a", "b", "c", "d"};
    case WarpingVariant::BoxCox:
      return params_.empty() ? std::vector<std::string>{} : std::vector<std::string>{"lambda"};
    case WarpingVariant::SinhArcsinh: return {"a", "b"};
    case WarpingVariant::TanhMix: {
      std::vector<std::string> names;
      const int d = static_cast<int>(params_.size() / 3);
      for (int j = 0; j < d; ++j) {
        const std::string s = std::to_string(j + 1);
        names.push_back("a" + s);
        names.push_back("b" + s);
        names.push_back("c" + s);
      }
      return names;
    }
  }
  return {};
}

int ElementaryWarping::trainable_count() const {
  return static_cast<int>(std::count(trainable_.begin(), trainable_.end(), 1));
}

void ElementaryWarping::get_trainable(double* out) const {
  int k = 0;
  for (size_t i = 0; i < params_.size(); ++i) {
    if (trainable_[i]) out[k++] = params_[i];
  }
}

void ElementaryWarping::set_trainable(const double* in) {
  int k = 0;
  for (size_t i = 0; i < params_.size(); ++i) {
    if (trainable_[i]) params_[i] = in[k++];
  }
}

void ElementaryWarping::set_trainable_mask(const std::vector<std::uint8_t>& mask) {
  if (mask.size() != params_.size()) {
    throw InvalidParameter("trainable mask size must match parameter count");
  }
  trainable_ = mask;
}

double ElementaryWarping::forward(double y) const {
  switch (variant_) {
    case WarpingVariant::Affine:
      return natural_param(0) + natural_param(1) * y;
    case WarpingVariant::Log:
      if (!(y > 0.0)) throw DomainError("log warping requires y > 0");
      return std::log(y);
    case WarpingVariant::Arcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      const double c = natural_param(2), d = natural_param(3);
      return a + b * std::asinh((y - c) / d);
    }
    case WarpingVariant::BoxCox: {
      if (params_.empty()) {  // lambda = 0
        if (!(y > 0.0)) throw DomainError("box_cox(0) requires y > 0");
        return std::log(y);
      }
      const double lambda = natural_param(0);
      if (lambda < 1.0 && std::abs(y) < kBoxCoxSingular) {
        throw DomainError("box_cox: |y| too close to 0 for lambda < 1");
      }
      if (lambda == 1.0) return y - 1.0;
      if (lambda < kSmallLambda) {
        // (sgn(y)|y|^l - 1)/l via expm1 to avoid cancellation.
        const double t = std::expm1(lambda * std::log(std::abs(y)));
        return y > 0.0 ? t / lambda : -(t + 2.0) / lambda;
      }
      return (sgn(y) * std::pow(std::abs(y), lambda) - 1.0) / lambda;
    }
    case WarpingVariant::SinhArcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      return std::sinh(b * std::asinh(y) - a);
    }
    case WarpingVariant::TanhMix: {
      double s = y;
      for (size_t j = 0; j < params_.size(); j += 3) {
        const double a = std::exp(params_[j]);
        const double b = std::exp(params_[j + 1]);
        const double c = params_[j + 2];
        s += a * std::tanh(b * (y + c));
      }
      return s;
    }
  }
  throw UnsupportedVariant("forward: unknown warping variant");
}

double ElementaryWarping::derivative(double y) const {
  switch (variant_) {
    case WarpingVariant::Affine:
      return natural_param(1);
    case WarpingVariant::Log:
      if (!(y > 0.0)) throw DomainError("log warping requires y > 0");
      return 1.0 / y;
    case WarpingVariant::Arcsinh: {
      const double b = natural_param(1), c = natural_param(2), d = natural_param(3);
      return b / std::sqrt(d * d + (y - c) * (y - c));
    }
    case WarpingVariant::BoxCox: {
      if (params_.empty()) {
        if (!(y > 0.0)) throw DomainError("box_cox(0) requires y > 0");
        return 1.0 / y;
      }
      const double lambda = natural_param(0);
      if (lambda < 1.0 && std::abs(y) < kBoxCoxSingular) {
        throw DomainError("box_cox: |y| too close to 0 for lambda < 1");
      }
      return std::pow(std::abs(y), lambda - 1.0);
    }
    case WarpingVariant::SinhArcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      return b * std::cosh(b * std::asinh(y) - a) / std::sqrt(1.0 + y * y);
    }
    case WarpingVariant::TanhMix: {
      double s = 1.0;
      for (size_t j = 0; j < params_.size(); j += 3) {
        const double a = std::exp(params_[j]);
        const double b = std::exp(params_[j + 1]);
        const double c = params_[j + 2];
        const double t = std::tanh(b * (y + c));
        s += a * b * (1.0 - t * t);
      }
      return s;
    }
  }
  throw UnsupportedVariant("derivative: unknown warping variant");
}

double ElementaryWarping::log_derivative(double y) const {
  switch (variant_) {
    case WarpingVariant::Affine: {
      if (positive_scale_) return params_[1];
      const double b = params_[1];
      if (!(b > 0.0)) throw DomainError("affine: non-increasing scale in log-derivative");
      return std::log(b);
    }
    case WarpingVariant::Log:
      if (!(y > 0.0)) throw DomainError("log warping requires y > 0");
      return -std::log(y);
    case WarpingVariant::Arcsinh: {
      const double c = natural_param(2), d = natural_param(3);
      return params_[1] - 0.5 * std::log(d * d + (y - c) * (y - c));
    }
    case WarpingVariant::BoxCox: {
      if (params_.empty()) {
        if (!(y > 0.0)) throw DomainError("box_cox(0) requires y > 0");
        return -std::log(y);
      }
      const double lambda = natural_param(0);
      if (lambda < 1.0 && std::abs(y) < kBoxCoxSingular) {
        throw DomainError("box_cox: |y| too close to 0 for lambda < 1");
      }
      return (lambda - 1.0) * std::log(std::abs(y));
    }
    case WarpingVariant::SinhArcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      return params_[1] + log_cosh(b * std::asinh(y) - a) - 0.5 * std::log1p(y * y);
    }
    case WarpingVariant::TanhMix:
      return std::log(derivative(y));
  }
  throw UnsupportedVariant("log_derivative: unknown warping variant");
}

bool ElementaryWarping::has_closed_form_inverse() const {
  return variant_ != WarpingVariant::TanhMix || params_.empty();
}

double ElementaryWarping::inverse(double x) const {
  switch (variant_) {
    case WarpingVariant::Affine:
      return (x - natural_param(0)) / natural_param(1);
    case WarpingVariant::Log:
      return std::exp(x);
    case WarpingVariant::Arcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      const double c = natural_param(2), d = natural_param(3);
      return c + d * std::sinh((x - a) / b);
    }
    case WarpingVariant::BoxCox: {
      if (params_.empty()) return std::exp(x);
      const double lambda = natural_param(0);
      if (lambda == 1.0) return x + 1.0;
      const double u = lambda * x + 1.0;
      if (u == 0.0) return 0.0;
      if (u > 0.0) return std::exp(std::log1p(lambda * x) / lambda);
      return -std::exp(std::log(-u) / lambda);
    }
    case WarpingVariant::SinhArcsinh: {
      const double a = natural_param(0), b = natural_param(1);
      return std::sinh((std::asinh(x) + a) / b);
    }
    case WarpingVariant::TanhMix:
      if (params_.empty()) return x;
      throw NoClosedFormInverse("tanh_mix has no closed-form inverse; use numeric_inverse");
  }
  throw UnsupportedVariant("inverse: unknown warping variant");
}

int CompositeWarping::param_count() const {
  int n = 0;
  for (const auto& l : layers_) n += l.param_count();
  return n;
}

int CompositeWarping::trainable_count() const {
  int n = 0;
  for (const auto& l : layers_) n += l.trainable_count();
  return n;
}

Vector CompositeWarping::get_trainable() const {
  Vector theta(trainable_count());
  int off = 0;
  for (const auto& l : layers_) {
    l.get_trainable(theta.data() + off);
    off += l.trainable_count();
  }
  return theta;
}

void CompositeWarping::set_trainable(const Vector& theta) {
  if (theta.size() != trainable_count()) {
    throw DimensionMismatch("CompositeWarping::set_trainable: size mismatch");
  }
  int off = 0;
  for (auto& l : layers_) {
    l.set_trainable(theta.data() + off);
    off += l.trainable_count();
  }
}

double CompositeWarping::forward(double y) const {
  double v = y;
  for (const auto& l : layers_) v = l.forward(v);
  return v;
}

double CompositeWarping::derivative(double y) const {
  double v = y;
  double prod = 1.0;
  for (const auto& l : layers_) {
    prod *= l.derivative(v);
    v = l.forward(v);
  }
  return prod;
}

double CompositeWarping::log_derivative(double y) const {
  double v = y;
  double sum = 0.0;
  for (const auto& l : layers_) {
    sum += l.log_derivative(v);
    v = l.forward(v);
  }
  return sum;
}

bool CompositeWarping::has_closed_form_inverse() const {
  for (const auto& l : layers_) {
    if (!l.has_closed_form_inverse()) return false;
  }
  return true;
}

double CompositeWarping::inverse(double x) const {
  double v = x;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) v = it->inverse(v);
  return v;
}

Vector CompositeWarping::forward(const Vector& y) const {
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = forward(y[i]);
  return out;
}

Vector CompositeWarping::inverse(const Vector& x) const {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = inverse(x[i]);
  return out;
}

namespace {

template <class Fwd, class Deriv>
NumericInverseResult numeric_inverse_impl(Fwd&& f, Deriv&& df, double x, double tol,
                                          int max_iter) {
  if (!(tol > 0.0)) throw InvalidParameter("numeric_inverse: tol must be > 0");

  NumericInverseResult res;
  const double scale = std::max(1.0, std::abs(x));

  // Bracket by doubling expansion around x; valid for any increasing map
  // whose range covers x (phi(y) - y is bounded for the tanh mixture).
  double lo = x, hi = x;
  double step = scale;
  double flo = f(lo), fhi = flo;
  ++res.iterations;
  for (int i = 0; i < 200 && flo > x; ++i) {
    lo -= step;
    step *= 2.0;
    flo = f(lo);
    ++res.iterations;
  }
  step = scale;
  fhi = f(hi);
  ++res.iterations;
  for (int i = 0; i < 200 && fhi < x; ++i) {
    hi += step;
    step *= 2.0;
    fhi = f(hi);
    ++res.iterations;
  }
  if (flo > x || fhi < x) {
    throw NoConvergence("numeric_inverse: failed to bracket the root");
  }

  // Bisection to seed Newton.
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++res.iterations;
    if (std::abs(fm - x) <= tol) {
      res.value = mid;
      res.converged = true;
      res.bracket_lo = lo;
      res.bracket_hi = hi;
      return res;
    }
    if (fm < x) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-3 * scale) break;
  }

  // Newton polishing, kept inside the bracket.
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fy = f(y);
    ++res.iterations;
    if (std::abs(fy - x) <= tol) {
      res.value = y;
      res.converged = true;
      res.bracket_lo = lo;
      res.bracket_hi = hi;
      return res;
    }
    if (fy < x) {
      lo = y;
    } else {
      hi = y;
    }
    const double dy = df(y);
    double next = y - (fy - x) / dy;
    if (!(dy > 0.0) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    y = next;
  }

  std::ostringstream msg;
  msg << "numeric_inverse: no convergence after " << max_iter
      << " Newton steps; best bracket [" << lo << ", " << hi << "]";
  throw NoConvergence(msg.str());
}

}  // namespace

NumericInverseResult numeric_inverse(const CompositeWarping& w, double x, double tol,
                                     int max_iter) {
  return numeric_inverse_impl([&](double y) { return w.forward(y); },
                              [&](double y) { return w.derivative(y); }, x, tol, max_iter);
}

NumericInverseResult numeric_inverse(const ElementaryWarping& w, double x, double tol,
                                     int max_iter) {
  return numeric_inverse_impl([&](double y) { return w.forward(y); },
                              [&](double y) { return w.derivative(y); }, x, tol, max_iter);
}

double boxcox_limit_check(double lambda, double y) {
  if (!(y > 0.0)) throw DomainError("boxcox_limit_check requires y > 0");
  if (lambda < 0.0 || lambda > 1e-6) {
    throw DomainError("boxcox_limit_check requires lambda in [0, 1e-6]");
  }
  if (lambda == 0.0) return std::log(y);
  return std::expm1(lambda * std::log(y)) / lambda;
}

CompositeWarping sal_layer(double a, double b, double c, double d) {
  if (!(b > 0.0) || !(c > 0.0)) throw InvalidParameter("sal_layer: b and c must be > 0");
  std::vector<ElementaryWarping> layers;
  layers.push_back(ElementaryWarping::sinh_arcsinh(d, c));
  layers.push_back(ElementaryWarping::positive_affine(a, b));
  return CompositeWarping(std::move(layers));
}

CompositeWarping sal_stack(int depth) {
  std::vector<ElementaryWarping> layers;
  layers.reserve(2 * depth);
  for (int i = 0; i < depth; ++i) {
    const CompositeWarping unit = sal_layer(0.0, 1.0, 1.0, 0.0);
    layers.insert(layers.end(), unit.layers().begin(), unit.layers().end());
  }
  return CompositeWarping(std::move(layers));
}

}  // namespace cwgp
