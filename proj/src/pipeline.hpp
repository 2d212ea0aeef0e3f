#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "eval.hpp"
#include "ingest.hpp"

// End-to-end command implementations shared by the C API and the CLI, so the
// on-disk layouts are defined in exactly one place.
namespace bmvr {

// Generate per the design and persist as a dataset directory (raw train/test
// CSVs, truth matrices, design sidecar).
void simulate_to_dir(const nlohmann::json& design_json, const std::string& out_dir);

struct FitOptions {
  std::string method;
  nlohmann::json config = nlohmann::json::object();
  bool seed_set = false;
  std::uint64_t seed = 0;  // used when seed_set
  int iterations = -1;     // <= 0: keep config value
  int burn_in = -1;        // < 0: keep config value
  std::string summary = "mean"; // "median" additionally writes median files
  bool save_chain = true;
};

// Fit one method on a dataset directory; writes posterior summary CSVs on the
// standardized and original scales, a summary.json (with test RMSE and, when
// the directory carries the truth, losses), and optionally the chain itself.
void fit_to_dir(const std::string& dataset_dir, const FitOptions& opt,
                const std::string& out_dir);

// Full replicate study; writes results.csv, timings.csv, summary.json.
// Returns the number of error rows.
int study_to_dir(const nlohmann::json& study_json, const std::string& out_dir,
                 int threads_override = 0);

// Ingest a raw CSV into a dataset directory plus a correlation report.
void ingest_to_dir(const std::string& csv_path, const nlohmann::json& spec_json,
                   const std::string& out_dir);

// Aggregate an existing results.csv into box-plot data and an RMSE table.
void report_to_dir(const std::string& results_csv, const std::string& out_dir);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

} // namespace bmvr
