#include "cwgp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cwgp {

using Eigen::VectorXd;

VectorXd finite_diff_grad(const Objective& f, const VectorXd& theta, double step) {
  if (!(step > 0.0)) throw InvalidParameter("finite_diff_grad: step must be > 0");
  const Eigen::Index n = theta.size();
  VectorXd grad(n);
  VectorXd work = theta;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(theta[i]));
    work[i] = theta[i] + h;
    const double fp = f(work);
    work[i] = theta[i] - h;
    const double fm = f(work);
    work[i] = theta[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NonFiniteObjective("finite_diff_grad: objective non-finite at perturbed point");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

namespace {

struct LineSearchResult {
  double alpha = 0.0;
  double value = 0.0;
  int evals = 0;
  bool ok = false;
};

// Armijo backtracking with quadratic interpolation.
LineSearchResult armijo_search(const Objective& f, const VectorXd& x, const VectorXd& d,
                               double f0, double slope) {
  constexpr double c1 = 1e-4;
  LineSearchResult res;
  double alpha = 1.0;
  for (int k = 0; k < 50; ++k) {
    const double fv = f(x + alpha * d);
    ++res.evals;
    if (std::isfinite(fv) && fv <= f0 + c1 * alpha * slope) {
      res.alpha = alpha;
      res.value = fv;
      res.ok = true;
      return res;
    }
    double next = 0.5 * alpha;
    if (std::isfinite(fv)) {
      const double denom = 2.0 * (fv - f0 - slope * alpha);
      if (denom > 0.0) {
        next = -slope * alpha * alpha / denom;
        next = std::clamp(next, 0.1 * alpha, 0.5 * alpha);
      }
    }
    alpha = next;
    if (alpha * d.norm() < 1e-16 * std::max(1.0, x.norm())) break;
  }
  return res;
}

}  // namespace

OptimResult bfgs_minimize(const Objective& f, const VectorXd& theta0,
                          const OptimOptions& opts) {
  const Eigen::Index n = theta0.size();
  OptimResult res;
  res.theta = theta0;
  res.value = f(theta0);
  ++res.trace.function_evals;
  if (!std::isfinite(res.value)) {
    throw NonFiniteObjective("bfgs_minimize: objective non-finite at the start");
  }
  if (n == 0) {
    res.trace.converged = true;
    res.trace.stop_reason = "empty parameter vector";
    return res;
  }

  VectorXd x = theta0;
  double fx = res.value;
  VectorXd g = finite_diff_grad(f, x, opts.grad_step);
  res.trace.function_evals += 2 * static_cast<int>(n);

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  bool first_update = true;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    res.trace.iterations = iter + 1;
    if (g.cwiseAbs().maxCoeff() < opts.grad_tol) {
      res.trace.converged = true;
      res.trace.stop_reason = "gradient norm below tolerance";
      break;
    }

    VectorXd d = -(h_inv * g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      h_inv.setIdentity();
      d = -g;
      slope = g.dot(d);
      first_update = true;
    }

    const LineSearchResult ls = armijo_search(f, x, d, fx, slope);
    res.trace.function_evals += ls.evals;
    if (!ls.ok) {
      res.trace.line_search_failed = true;
      res.trace.stop_reason = "line search failed";
      break;
    }

    const VectorXd s = ls.alpha * d;
    const VectorXd x_new = x + s;
    const double f_new = ls.value;
    VectorXd g_new = finite_diff_grad(f, x_new, opts.grad_step);
    res.trace.function_evals += 2 * static_cast<int>(n);
    const VectorXd yv = g_new - g;

    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (first_update) {
        h_inv *= sy / yv.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const VectorXd hy = h_inv * yv;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h_inv.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
      h_inv.noalias() += (rho * rho * yv.dot(hy) + rho) * (s * s.transpose());
    }

    const double improvement = fx - f_new;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (fx < res.value) {
      res.value = fx;
      res.theta = x;
    }
    if (improvement <= opts.rel_tol * std::max(1.0, std::abs(fx))) {
      res.trace.converged = true;
      res.trace.stop_reason = "relative improvement below tolerance";
      break;
    }
  }

  if (res.trace.stop_reason.empty()) res.trace.stop_reason = "max iterations";
  return res;
}

namespace {

// Golden-section bracketing followed by Brent's parabolic/golden search.
struct LineMin {
  double alpha = 0.0;
  double value = 0.0;
  int evals = 0;
};

LineMin brent_line_min(const std::function<double(double)>& g, double f0) {
  constexpr double kGold = 1.618033988749895;
  constexpr double kCGold = 0.3819660112501051;
  LineMin out;

  // Bracket the minimum starting from alpha = 0.
  double ax = 0.0, bx = 1.0;
  double fa = f0, fb = g(bx);
  ++out.evals;
  if (fb > fa) {
    std::swap(ax, bx);
    std::swap(fa, fb);
  }
  double cx = bx + kGold * (bx - ax);
  double fc = g(cx);
  ++out.evals;
  int guard = 0;
  while (fb > fc && guard++ < 100) {
    ax = bx;
    fa = fb;
    bx = cx;
    fb = fc;
    cx = bx + kGold * (bx - ax);
    fc = g(cx);
    ++out.evals;
  }

  double lo = std::min(ax, cx), hi = std::max(ax, cx);
  double x = bx, w = bx, v = bx;
  double fx = fb, fw = fb, fv = fb;
  double d = 0.0, e = 0.0;

  for (int iter = 0; iter < 100; ++iter) {
    const double xm = 0.5 * (lo + hi);
    const double tol1 = 1e-10 * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;

    bool use_golden = true;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (lo - x) && p < q * (hi - x)) {
        d = p / q;
        const double u = x + d;
        if (u - lo < tol2 || hi - u < tol2) d = (xm > x ? tol1 : -tol1);
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x >= xm ? lo - x : hi - x);
      d = kCGold * e;
    }

    const double u = (std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1));
    const double fu = g(u);
    ++out.evals;
    if (fu <= fx) {
      if (u >= x) lo = x; else hi = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) lo = u; else hi = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  out.alpha = x;
  out.value = fx;
  return out;
}

}  // namespace

OptimResult powell_minimize(const Objective& f, const VectorXd& theta0,
                            const OptimOptions& opts) {
  const Eigen::Index n = theta0.size();
  OptimResult res;
  res.theta = theta0;
  res.value = f(theta0);
  ++res.trace.function_evals;
  if (!std::isfinite(res.value)) {
    throw NonFiniteObjective("powell_minimize: objective non-finite at the start");
  }
  if (n == 0) {
    res.trace.converged = true;
    res.trace.stop_reason = "empty parameter vector";
    return res;
  }

  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n);
  VectorXd p = theta0;
  double fp = res.value;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    res.trace.iterations = iter + 1;
    const VectorXd p_start = p;
    const double f_start = fp;
    double biggest_drop = 0.0;
    Eigen::Index ibig = 0;

    for (Eigen::Index i = 0; i < n; ++i) {
      const VectorXd dir = dirs.col(i);
      const double scale = std::max(1.0, p.norm());
      auto g1 = [&](double a) { return f(p + (a * 0.1 * scale) * dir); };
      const LineMin lm = brent_line_min(g1, fp);
      res.trace.function_evals += lm.evals;
      if (lm.value < fp) {
        if (fp - lm.value > biggest_drop) {
          biggest_drop = fp - lm.value;
          ibig = i;
        }
        p += (lm.alpha * 0.1 * scale) * dir;
        fp = lm.value;
      }
    }

    if (fp < res.value) {
      res.value = fp;
      res.theta = p;
    }
    if (2.0 * (f_start - fp) <= opts.rel_tol * (std::abs(f_start) + std::abs(fp)) + 1e-300) {
      res.trace.converged = true;
      res.trace.stop_reason = "relative improvement below tolerance";
      return res;
    }

    // Powell's direction-replacement test on the extrapolated point.
    const VectorXd extrap = 2.0 * p - p_start;
    const double f_extrap = f(extrap);
    ++res.trace.function_evals;
    if (f_extrap < f_start) {
      const double t = 2.0 * (f_start - 2.0 * fp + f_extrap) *
                           (f_start - fp - biggest_drop) * (f_start - fp - biggest_drop) -
                       biggest_drop * (f_start - f_extrap) * (f_start - f_extrap);
      if (t < 0.0) {
        VectorXd new_dir = p - p_start;
        const double norm = new_dir.norm();
        if (norm > 0.0) {
          new_dir /= norm;
          const double scale = std::max(1.0, p.norm());
          auto g2 = [&](double a) { return f(p + (a * 0.1 * scale) * new_dir); };
          const LineMin lm = brent_line_min(g2, fp);
          res.trace.function_evals += lm.evals;
          if (lm.value < fp) {
            p += (lm.alpha * 0.1 * scale) * new_dir;
            fp = lm.value;
          }
          dirs.col(ibig) = dirs.col(n - 1);
          dirs.col(n - 1) = new_dir;
        }
      }
    }
    if (fp < res.value) {
      res.value = fp;
      res.theta = p;
    }
  }

  res.trace.stop_reason = "max iterations";
  return res;
}

}  // namespace cwgp
