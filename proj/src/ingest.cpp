#include "ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bmvr {

RawTable load_table(const std::string& path) {
  CsvTable t = read_csv(path); // enforces rectangular, finite, numeric
  return RawTable{std::move(t.columns), std::move(t.values), path};
}

IngestSpec ingest_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("ingest spec must be a JSON object");
  static const std::set<std::string> known = {
      "response_columns", "predictor_columns", "predictor_first",
      "predictor_last",   "predictor_stride",  "drop_rows",
      "train_count"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw std::invalid_argument("ingest spec: unknown key '" + item.key() + "'");
  IngestSpec s;
  if (j.contains("response_columns"))
    s.response_columns = j.at("response_columns").get<std::vector<std::string>>();
  if (j.contains("predictor_columns"))
    s.predictor_columns = j.at("predictor_columns").get<std::vector<std::string>>();
  if (j.contains("predictor_first"))
    s.predictor_first = j.at("predictor_first").get<std::string>();
  if (j.contains("predictor_last"))
    s.predictor_last = j.at("predictor_last").get<std::string>();
  if (j.contains("predictor_stride"))
    s.predictor_stride = j.at("predictor_stride").get<int>();
  if (j.contains("drop_rows")) s.drop_rows = j.at("drop_rows").get<std::vector<int>>();
  if (j.contains("train_count")) s.train_count = j.at("train_count").get<int>();
  return s;
}

nlohmann::json to_json(const IngestSpec& spec) {
  return {{"response_columns", spec.response_columns},
          {"predictor_columns", spec.predictor_columns},
          {"predictor_first", spec.predictor_first},
          {"predictor_last", spec.predictor_last},
          {"predictor_stride", spec.predictor_stride},
          {"drop_rows", spec.drop_rows},
          {"train_count", spec.train_count}};
}

namespace {

Eigen::Index find_column(const RawTable& table, const std::string& name) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), name);
  if (it == table.columns.end())
    throw std::invalid_argument("ingest: column '" + name + "' not found in '" +
                                table.path + "'");
  return it - table.columns.begin();
}

std::vector<Eigen::Index> predictor_indices(const RawTable& table,
                                            const IngestSpec& spec) {
  std::vector<Eigen::Index> idx;
  if (!spec.predictor_columns.empty()) {
    for (const auto& name : spec.predictor_columns)
      idx.push_back(find_column(table, name));
    return idx;
  }
  if (spec.predictor_first.empty() || spec.predictor_last.empty())
    throw std::invalid_argument(
        "ingest: need predictor_columns or a predictor_first/predictor_last range");
  if (spec.predictor_stride < 1)
    throw std::invalid_argument("ingest: predictor_stride must be >= 1");
  const Eigen::Index first = find_column(table, spec.predictor_first);
  const Eigen::Index last = find_column(table, spec.predictor_last);
  if (last < first)
    throw std::invalid_argument("ingest: predictor_last precedes predictor_first");
  for (Eigen::Index c = first; c <= last; c += spec.predictor_stride) idx.push_back(c);
  return idx;
}

Matrix select_columns(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  return out;
}

} // namespace

IngestResult standardize(const RawTable& table, const IngestSpec& spec) {
  if (spec.response_columns.empty())
    throw std::invalid_argument("ingest: response_columns must be nonempty");
  std::vector<Eigen::Index> y_idx;
  for (const auto& name : spec.response_columns) y_idx.push_back(find_column(table, name));
  const std::vector<Eigen::Index> x_idx = predictor_indices(table, spec);

  // drop outlier rows (1-based indices into the raw table)
  std::set<Eigen::Index> drop;
  for (int r : spec.drop_rows) {
    if (r < 1 || r > table.values.rows())
      throw std::invalid_argument("ingest: drop row " + std::to_string(r) +
                                  " outside 1.." + std::to_string(table.values.rows()));
    drop.insert(r - 1);
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < table.values.rows(); ++i)
    if (!drop.count(i)) keep.push_back(i);

  const Eigen::Index n_kept = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index n_train =
      spec.train_count < 0 ? n_kept : static_cast<Eigen::Index>(spec.train_count);
  if (n_train < 2 || n_train > n_kept)
    throw std::invalid_argument("ingest: train_count must lie in 2.." +
                                std::to_string(n_kept));

  Matrix kept(n_kept, table.values.cols());
  for (Eigen::Index i = 0; i < n_kept; ++i) kept.row(i) = table.values.row(keep[i]);

  const Matrix X_all = select_columns(kept, x_idx);
  const Matrix Y_all = select_columns(kept, y_idx);
  std::vector<std::string> x_names, y_names;
  for (Eigen::Index c : x_idx) x_names.push_back(table.columns[static_cast<size_t>(c)]);
  for (Eigen::Index c : y_idx) y_names.push_back(table.columns[static_cast<size_t>(c)]);

  IngestResult out;
  out.predictor_names = x_names;
  out.response_names = y_names;
  out.train = standardize_train(Y_all.topRows(n_train), X_all.topRows(n_train),
                                x_names, y_names);
  const Eigen::Index n_test = n_kept - n_train;
  if (n_test > 0)
    out.test = apply_standardization(Y_all.bottomRows(n_test), X_all.bottomRows(n_test),
                                     out.train.stats);
  else
    out.test = apply_standardization(Matrix(0, Y_all.cols()), Matrix(0, X_all.cols()),
                                     out.train.stats);
  return out;
}

Matrix unstandardize_coefficients(const Matrix& B_std, const Standardization& stats) {
  if (B_std.rows() != stats.x_sd.size() || B_std.cols() != stats.y_sd.size())
    throw std::invalid_argument("unstandardize_coefficients: statistics mismatch");
  return (stats.x_sd.cwiseInverse()).asDiagonal() * B_std * stats.y_sd.asDiagonal();
}

Matrix destandardize_responses(const Matrix& Yhat_std, const Standardization& stats) {
  if (Yhat_std.cols() != stats.y_sd.size())
    throw std::invalid_argument("destandardize_responses: statistics mismatch");
  return (Yhat_std * stats.y_sd.asDiagonal()).rowwise() + stats.y_mean.transpose();
}

Vector implied_intercept(const Matrix& B_orig, const Standardization& stats) {
  if (B_orig.rows() != stats.x_mean.size() || B_orig.cols() != stats.y_mean.size())
    throw std::invalid_argument("implied_intercept: statistics mismatch");
  return stats.y_mean - B_orig.transpose() * stats.x_mean;
}

Matrix unstandardize_covariance(const Matrix& Sigma_std, const Standardization& stats) {
  if (Sigma_std.rows() != stats.y_sd.size() || Sigma_std.cols() != stats.y_sd.size())
    throw std::invalid_argument("unstandardize_covariance: statistics mismatch");
  return stats.y_sd.asDiagonal() * Sigma_std * stats.y_sd.asDiagonal();
}

CorrelationReport correlation_report(const Matrix& X, double threshold) {
  const Eigen::Index p = X.cols(), n = X.rows();
  if (p < 2) throw std::invalid_argument("correlation_report: need at least 2 columns");
  if (n < 2) throw std::invalid_argument("correlation_report: need at least 2 rows");
  Matrix centered = X.rowwise() - X.colwise().mean();
  Vector norms = centered.colwise().norm();
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(norms(j) > 0))
      throw std::invalid_argument("correlation_report: zero-variance column " +
                                  std::to_string(j + 1));
  CorrelationReport rep;
  rep.threshold = threshold;
  long above = 0;
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a + 1; b < p; ++b) {
      const double corr =
          std::abs(centered.col(a).dot(centered.col(b)) / (norms(a) * norms(b)));
      rep.max_abs_correlation = std::max(rep.max_abs_correlation, corr);
      if (corr >= threshold) ++above;
      ++rep.pairs;
    }
  rep.fraction_at_least_threshold =
      rep.pairs ? static_cast<double>(above) / static_cast<double>(rep.pairs) : 0.0;
  return rep;
}

} // namespace bmvr
