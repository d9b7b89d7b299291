#include "cwgp/gaussian.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

#include "cwgp/math_util.hpp"

namespace cwgp {

CholeskyFactor cholesky_with_jitter(const Matrix& mat, const JitterPolicy& policy) {
  if (mat.rows() != mat.cols()) {
    throw DimensionMismatch("cholesky_with_jitter: matrix must be square");
  }
  const Eigen::Index n = mat.rows();
  if (n == 0) return CholeskyFactor(Matrix(0, 0), 0.0, 0.0);

  const double sym_err = (mat - mat.transpose()).cwiseAbs().maxCoeff();
  const double scale = mat.cwiseAbs().maxCoeff();
  if (sym_err > 1e-12 * std::max(1.0, scale)) {
    throw DimensionMismatch("cholesky_with_jitter: matrix is not symmetric");
  }

  const double mean_diag = mat.diagonal().mean();
  for (double mult : policy.multipliers) {
    const double jitter = mult * mean_diag;
    if (jitter < 0.0) continue;
    Matrix work = mat;
    work.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(work);
    if (llt.info() != Eigen::Success) continue;
    Matrix lower = llt.matrixL();
    if ((lower.diagonal().array() <= 0.0).any()) continue;
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    return CholeskyFactor(std::move(lower), log_det, jitter);
  }

  std::ostringstream msg;
  msg << "cholesky_with_jitter: all jitter levels failed (n=" << n
      << ", mean diagonal=" << mean_diag << ")";
  throw FactorizationFailed(msg.str());
}

double mvn_logpdf(const Vector& x, const Vector& mean, const CholeskyFactor& chol) {
  const Eigen::Index n = x.size();
  if (mean.size() != n || chol.size() != n) {
    throw DimensionMismatch("mvn_logpdf: dimension mismatch");
  }
  const Vector z = chol.solve_lower(x - mean);
  return -0.5 * (static_cast<double>(n) * kLog2Pi + chol.log_det() + z.squaredNorm());
}

}  // namespace cwgp
