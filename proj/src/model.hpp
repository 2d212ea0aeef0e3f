#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace bmvr {

// Per-column means and standard deviations (denominator n-1) of the original
// data, kept so estimates can be mapped back to the original scale.
struct Standardization {
  Vector x_mean, x_sd, y_mean, y_sd;
};

// Standardized regression data plus the raw matrices it came from.
struct Dataset {
  Matrix Y; // n x q, standardized
  Matrix X; // n x p, standardized
  Matrix Y_raw;
  Matrix X_raw;
  Standardization stats;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  int q() const { return static_cast<int>(Y.cols()); }
};

// Compute column statistics from (Y_raw, X_raw) and standardize.  Throws on
// n < 2 or a zero-variance column (named via x_names/y_names when provided).
Dataset standardize_train(const Matrix& Y_raw, const Matrix& X_raw,
                          const std::vector<std::string>& x_names = {},
                          const std::vector<std::string>& y_names = {});

// Standardize with existing (train) statistics, e.g. for a test set.
Dataset apply_standardization(const Matrix& Y_raw, const Matrix& X_raw,
                              const Standardization& stats);

// Xstar * B; the fitted mean for each row of Xstar.
Matrix predict(const Matrix& B, const Matrix& Xstar);

// Y - predict(B, X), row i = y_i - B^T x_i.
Matrix residuals(const Dataset& data, const Matrix& B);

// Stored post-burn-in draws from one sampler run.
struct ChainOutput {
  std::string method;
  int iterations = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<Matrix> B;     // p x q per draw
  std::vector<Matrix> Gamma; // p x q binary per draw (selection methods only)
  std::vector<Matrix> Sigma; // q x q per draw
  // method-specific shrinkage blocks, e.g. "xi" (p x q), "tau" (1 x q),
  // "psi" (p x 1) under the keys the sampler chooses
  std::map<std::string, std::vector<Matrix>> extra;

  int retained() const { return static_cast<int>(B.size()); }
};

// One CSV per parameter block (one row per retained draw, vectorized
// column-major) plus a JSON metadata sidecar, under `dir`.
void save_chain(const std::string& dir, const ChainOutput& chain);
ChainOutput load_chain(const std::string& dir);

} // namespace bmvr
