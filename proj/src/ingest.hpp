#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csvio.hpp"
#include "model.hpp"

namespace bmvr {

struct RawTable {
  std::vector<std::string> columns;
  Matrix values;
  std::string path; // provenance
};

RawTable load_table(const std::string& path);

// How to turn a raw table into a train/test regression dataset.  Predictors
// come either from `predictor_columns` (explicit list) or from the inclusive
// name range [predictor_first, predictor_last] stepped by predictor_stride.
struct IngestSpec {
  std::vector<std::string> response_columns;
  std::vector<std::string> predictor_columns;
  std::string predictor_first, predictor_last;
  int predictor_stride = 1;
  std::vector<int> drop_rows; // 1-based row indices in the raw table (outliers)
  int train_count = -1;       // first train_count post-drop rows train, rest test
};

IngestSpec ingest_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IngestSpec& spec);

struct IngestResult {
  Dataset train, test;
  std::vector<std::string> predictor_names, response_names;
};

// Drop outlier rows, split train/test, select columns, standardize train and
// apply the train statistics to test.
IngestResult standardize(const RawTable& table, const IngestSpec& spec);

// B_orig_{jk} = B_std_{jk} * sd(y_k) / sd(x_j).
Matrix unstandardize_coefficients(const Matrix& B_std, const Standardization& stats);

// Map standardized-scale predictions back to the original response scale.
Matrix destandardize_responses(const Matrix& Yhat_std, const Standardization& stats);

// Intercept implied by the standardization: ybar_k - sum_j B_orig_jk xbar_j.
Vector implied_intercept(const Matrix& B_orig, const Standardization& stats);

// Original-scale error covariance D_y Sigma_std D_y.
Matrix unstandardize_covariance(const Matrix& Sigma_std, const Standardization& stats);

struct CorrelationReport {
  double max_abs_correlation = 0.0;
  double fraction_at_least_threshold = 0.0;
  double threshold = 0.99;
  long pairs = 0;
};

// Pairwise Pearson correlation summary over the columns of X.
CorrelationReport correlation_report(const Matrix& X, double threshold = 0.99);

} // namespace bmvr
