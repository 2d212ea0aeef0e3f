#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "samplers.hpp"
#include "simgen.hpp"

namespace bmvr {

// Frobenius norm of (truth - estimate).
double loss_frobenius(const Matrix& estimate, const Matrix& truth);

// Column k -> sqrt(mean_i (Ystar_ik - Yhat_ik)^2).
Vector rmse_per_response(const Matrix& Ystar, const Matrix& Yhat);

// Batch-means Monte Carlo standard error of the series mean.
double mcse_batch_means(const std::vector<double>& series, int batches);

struct ReplicateResult {
  int n = 0;
  int replicate = 0; // 1-based
  std::string method;
  double loss_B = 0.0, loss_Sigma = 0.0, loss_pred = 0.0;
  Vector rmse;    // length q, original scale
  double seconds = 0.0;
  std::string status = "ok"; // "ok" or "error: ..."
  bool ok() const { return status == "ok"; }
};

struct StudyConfig {
  SimDesign design; // n overridden by each entry of n_values
  std::vector<std::string> methods = {"twostep", "dss", "dhs", "mbsp"};
  int replicates = 25;
  std::vector<int> n_values = {40, 80, 200};
  std::uint64_t master_seed = 1;
  int iterations = 10000;
  int burn_in = 100;
  std::string summary = "mean";
  nlohmann::json method_configs = nlohmann::json::object(); // per-method overrides
  int threads = 0; // 0 = hardware concurrency
};

StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& cfg);

// Fit one method on simulated data and score it against the truth, all on the
// original (unstandardized) scale.
ReplicateResult evaluate_method(const std::string& method, const SimData& sim,
                                const nlohmann::json& method_config,
                                std::uint64_t method_seed, int iterations, int burn_in,
                                SummaryStatistic stat);

// For each (n, replicate, method): generate data from a per-replicate derived
// seed, fit, and score.  A failed fit becomes an error row, never an abort.
// Row order is fixed (n, then replicate, then method) regardless of thread
// scheduling; method seeds are derived from the method name, not its position.
std::vector<ReplicateResult> run_replicate_study(const StudyConfig& cfg);

// Long-format results CSV: n, replicate, method, losses, rmse_1..q, status.
// Wall-clock seconds go to a separate timings CSV so the results file is
// byte-identical across reruns with the same master seed.
void write_study_results_csv(const std::string& path,
                             const std::vector<ReplicateResult>& results, int q);
void write_study_timings_csv(const std::string& path,
                             const std::vector<ReplicateResult>& results);
std::vector<ReplicateResult> read_study_results_csv(const std::string& path);

// Per-(n, method) box-plot statistics (median, quartiles, 1.5*IQR whiskers)
// of each loss plus per-response median RMSE; error rows are excluded and
// counted.
nlohmann::json study_summary(const std::vector<ReplicateResult>& results);

} // namespace bmvr
