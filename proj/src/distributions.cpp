#include "distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace bmvr {

Vector sample_mvnormal(const Vector& mean, const Matrix& chol_lower, RngStream& rng) {
  if (chol_lower.rows() != chol_lower.cols() || chol_lower.rows() != mean.size())
    throw std::invalid_argument("sample_mvnormal: dimension mismatch");
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + chol_lower.triangularView<Eigen::Lower>() * z;
}

Matrix sample_inverse_wishart(double df, const SpdMatrix& scale, RngStream& rng) {
  const int q = scale.dim();
  if (!(df > q - 1))
    throw std::invalid_argument("sample_inverse_wishart: df must exceed dim - 1");
  // Bartlett: draw W ~ Wishart(df, scale^{-1}) as W = M M^T with M = L A,
  // L = chol(scale^{-1}); then S = W^{-1} = Z^T Z with Z = M^{-1}.
  const Matrix chol_inv_scale = cholesky_lower(scale.inverse());
  Matrix a = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(df - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Matrix m = chol_inv_scale.triangularView<Eigen::Lower>() * a;
  const Matrix z =
      m.triangularView<Eigen::Lower>().solve(Matrix::Identity(q, q));
  Matrix s = z.transpose() * z;
  return 0.5 * (s + s.transpose());
}

Matrix sample_standard_normal_matrix(int rows, int cols, RngStream& rng) {
  Matrix m(rows, cols);
  // column-major fill so draw order matches vec() conventions elsewhere
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

} // namespace bmvr
