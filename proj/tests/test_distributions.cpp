#include <cmath>
#include <vector>

#include <doctest.h>

#include "distributions.hpp"
#include "testutil.hpp"

using namespace bmvr;

TEST_SUITE("distributions") {

TEST_CASE("multivariate normal mean and covariance") {
  RngStream r(21);
  Vector mean(2);
  mean << 1.0, -2.0;
  Matrix cov(2, 2);
  cov << 2.0, 0.8, 0.8, 1.0;
  const Matrix L = cholesky_lower(cov);
  const int n = 200000;
  Matrix draws(n, 2);
  for (int i = 0; i < n; ++i) draws.row(i) = sample_mvnormal(mean, L, r).transpose();
  Vector m = draws.colwise().mean();
  CHECK(std::abs(m(0) - 1.0) < 0.02);
  CHECK(std::abs(m(1) + 2.0) < 0.02);
  Matrix centered = draws.rowwise() - m.transpose();
  Matrix S = centered.transpose() * centered / double(n - 1);
  CHECK(std::abs(S(0, 0) - 2.0) < 0.05);
  CHECK(std::abs(S(0, 1) - 0.8) < 0.03);
  CHECK(std::abs(S(1, 1) - 1.0) < 0.03);
}

TEST_CASE("inverse wishart mean matches scale/(df - q - 1)") {
  // df = 7, q = 3: marginal diagonals are IG(2.5, 0.25) with finite variance,
  // so a 2e4-draw mean is stable.
  RngStream r(22);
  const int q = 3, n = 20000;
  const SpdMatrix scale(0.5 * Matrix::Identity(q, q));
  Matrix sum = Matrix::Zero(q, q);
  for (int i = 0; i < n; ++i) {
    const Matrix s = sample_inverse_wishart(7.0, scale, r);
    CHECK(is_symmetric(s, 1e-9));
    sum += s;
  }
  const Matrix mean = sum / double(n);
  const Matrix expected = 0.5 * Matrix::Identity(q, q) / (7.0 - q - 1.0);
  // diagonal mean 1/6; MC sd of the mean ~ 0.0017
  CHECK(testutil::max_abs_diff(mean, expected) < 0.012);
}

TEST_CASE("inverse wishart with q=1 is inverse gamma") {
  // IW(df, [s]) for a 1x1 scale is IG(df/2, s/2): check E[X] and E[1/X].
  RngStream r(23);
  const SpdMatrix scale((Matrix(1, 1) << 2.0).finished());
  const double df = 7.0; // IG(3.5, 1): mean 1/2.5 = 0.4, E[1/X] = 3.5
  const int n = 50000;
  double sum = 0.0, sum_inv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_inverse_wishart(df, scale, r)(0, 0);
    CHECK(x > 0.0);
    sum += x;
    sum_inv += 1.0 / x;
  }
  CHECK(std::abs(sum / n - 0.4) < 0.01);
  CHECK(std::abs(sum_inv / n - 3.5) < 0.05);
}

TEST_CASE("inverse wishart rejects df at or below q - 1") {
  RngStream r(24);
  const SpdMatrix scale(Matrix::Identity(3, 3));
  CHECK_THROWS(sample_inverse_wishart(2.0, scale, r));
  CHECK_THROWS(sample_inverse_wishart(1.5, scale, r));
}

TEST_CASE("standard normal matrix is column major in the draw order") {
  RngStream a(25), b(25);
  const Matrix m = sample_standard_normal_matrix(3, 2, a);
  // drawing the same stream scalar-by-scalar must walk down the columns
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j) CHECK(m(j, k) == b.normal());
}

} // TEST_SUITE
