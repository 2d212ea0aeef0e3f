#pragma once

#include "linalg.hpp"
#include "rng.hpp"

namespace bmvr {

// Draw from N(mean, L L^T) given the lower Cholesky factor L of the covariance.
Vector sample_mvnormal(const Vector& mean, const Matrix& chol_lower, RngStream& rng);

// Draw from the inverse Wishart IW(df, scale) with density proportional to
// |S|^{-(df+q+1)/2} exp(-tr(scale S^{-1})/2), so E[S] = scale/(df-q-1) for
// df > q+1.  Requires df > q-1.  Uses the Bartlett decomposition of the
// Wishart for scale^{-1} followed by a triangular inversion.
Matrix sample_inverse_wishart(double df, const SpdMatrix& scale, RngStream& rng);

// Matrix of iid N(0,1) entries.
Matrix sample_standard_normal_matrix(int rows, int cols, RngStream& rng);

} // namespace bmvr
