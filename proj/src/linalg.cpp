#include "linalg.hpp"

#include <cmath>

namespace bmvr {

bool is_symmetric(const Matrix& m, double rtol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rtol * scale;
}

Matrix cholesky_lower(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix not square");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // one jittered retry; near-singular conditionals show up under strong
  // collinearity and a small diagonal bump keeps the chain moving
  const double jitter = 1e-10 * m.trace() / static_cast<double>(m.rows());
  Matrix bumped = m;
  bumped.diagonal().array() += jitter;
  Eigen::LLT<Matrix> retry(bumped);
  if (retry.info() == Eigen::Success) return retry.matrixL();
  throw NotPositiveDefinite("cholesky: matrix not positive definite after jitter retry");
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  if (!is_symmetric(m_))
    throw std::invalid_argument("SpdMatrix: matrix not symmetric");
  chol_ = cholesky_lower(m_);
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(Matrix::Identity(dim, dim)); }

Matrix SpdMatrix::inverse() const {
  const Matrix inv =
      chol_.transpose().triangularView<Eigen::Upper>().solve(
          chol_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim(), dim())));
  return 0.5 * (inv + inv.transpose());
}

Matrix ar1_covariance(int p, double rho) {
  if (p < 1) throw std::invalid_argument("ar1_covariance: p must be >= 1");
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("ar1_covariance: |rho| must be < 1");
  Matrix m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = std::pow(rho, std::abs(i - j));
  return m;
}

Matrix equicorrelation(int q, double r) {
  if (q < 1) throw std::invalid_argument("equicorrelation: q must be >= 1");
  if (q >= 2) {
    const double lower = -1.0 / static_cast<double>(q - 1);
    if (!(r > lower && r < 1.0))
      throw std::invalid_argument(
          "equicorrelation: r outside (-1/(q-1), 1), matrix would not be positive definite");
  }
  Matrix m = Matrix::Constant(q, q, r);
  m.diagonal().setOnes();
  return m;
}

} // namespace bmvr
