// Dense matrix aliases, SPD wrapper, and the factorizations the samplers use.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bmvr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class NotPositiveDefinite : public std::runtime_error {
public:
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

bool is_symmetric(const Matrix& m, double rtol = 1e-12);

// Lower Cholesky factor. If the factorization fails, retries once after
// adding 1e-10 * trace/dim to the diagonal, then throws NotPositiveDefinite.
Matrix cholesky_lower(const Matrix& m);

double frobenius_norm(const Matrix& a);

// Symmetric positive definite matrix: validated on construction, caches its
// lower Cholesky factor.
class SpdMatrix {
public:
  explicit SpdMatrix(Matrix m);
  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const Matrix& cholesky() const { return chol_; }

  // Inverse via the cached factor, symmetrized.
  Matrix inverse() const;

private:
  Matrix m_;
  Matrix chol_;
};

// Covariance constructors from the simulation design.
Matrix ar1_covariance(int p, double rho);       // entry (i,j) = rho^|i-j|
Matrix equicorrelation(int q, double r);        // 1 on diagonal, r off

} // namespace bmvr
