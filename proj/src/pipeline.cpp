#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "csvio.hpp"

namespace bmvr {

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

void simulate_to_dir(const nlohmann::json& design_json, const std::string& out_dir) {
  const SimDesign design = sim_design_from_json(design_json);
  const SimData data = generate(design);
  save_simdata(out_dir, data, design);
}

namespace {

std::vector<std::string> numbered(const char* prefix, Eigen::Index k) {
  std::vector<std::string> names;
  for (Eigen::Index i = 1; i <= k; ++i)
    names.push_back(std::string(prefix) + std::to_string(i));
  return names;
}

void write_estimate_files(const std::string& out_dir, const std::string& tag,
                          const PosteriorEstimates& est, const Standardization& stats) {
  const auto bcols = numbered("b", est.B.cols());
  const auto scols = numbered("s", est.Sigma.cols());
  write_matrix_csv(out_dir + "/B_" + tag + ".csv", est.B, bcols);
  write_matrix_csv(out_dir + "/Sigma_" + tag + ".csv", est.Sigma, scols);
  write_matrix_csv(out_dir + "/B_" + tag + "_original.csv",
                   unstandardize_coefficients(est.B, stats), bcols);
  write_matrix_csv(out_dir + "/Sigma_" + tag + "_original.csv",
                   unstandardize_covariance(est.Sigma, stats), scols);
}

} // namespace

void fit_to_dir(const std::string& dataset_dir, const FitOptions& opt,
                const std::string& out_dir) {
  const SimData data = load_dataset_dir(dataset_dir);
  std::uint64_t seed = 1;
  if (opt.config.is_object() && opt.config.contains("seed"))
    seed = opt.config.at("seed").get<std::uint64_t>();
  if (opt.seed_set) seed = opt.seed;
  const SummaryStatistic stat = summary_statistic_from_string(opt.summary);

  const ChainOutput chain = run_method(opt.method, data.train, opt.config, seed,
                                       opt.iterations, opt.burn_in);
  std::filesystem::create_directories(out_dir);
  if (opt.save_chain) save_chain(out_dir + "/chain", chain);

  const Standardization& stats = data.train.stats;
  const PosteriorEstimates mean_est =
      estimate_from_chain(chain, data.train, SummaryStatistic::kMean);
  write_estimate_files(out_dir, "mean", mean_est, stats);
  if (stat == SummaryStatistic::kMedian)
    write_estimate_files(
        out_dir, "median",
        estimate_from_chain(chain, data.train, SummaryStatistic::kMedian), stats);
  if (!chain.Gamma.empty())
    write_matrix_csv(out_dir + "/Gamma_mean.csv",
                     posterior_summary(chain.Gamma, SummaryStatistic::kMean),
                     numbered("g", chain.Gamma.front().cols()));

  // score with the requested statistic
  const PosteriorEstimates est = estimate_from_chain(chain, data.train, stat);
  const Matrix B_orig = unstandardize_coefficients(est.B, stats);
  nlohmann::json summary;
  summary["method"] = chain.method;
  summary["iterations"] = chain.iterations;
  summary["burn_in"] = chain.burn_in;
  summary["seed"] = chain.seed;
  summary["retained"] = chain.retained();
  summary["summary_statistic"] = opt.summary;
  summary["single_draw"] = chain.retained() == 1; // flagged low-quality
  const Vector intercept = implied_intercept(B_orig, stats);
  summary["implied_intercept"] =
      std::vector<double>(intercept.data(), intercept.data() + intercept.size());
  if (data.test.Y_raw.rows() > 0) {
    const Matrix Yhat_raw =
        destandardize_responses(predict(est.B, data.test.X), stats);
    const Vector rmse = rmse_per_response(data.test.Y_raw, Yhat_raw);
    summary["rmse"] = std::vector<double>(rmse.data(), rmse.data() + rmse.size());
    summary["loss_pred"] = loss_frobenius(Yhat_raw, data.test.Y_raw);
  }
  if (data.B_true.size())
    summary["loss_B"] = loss_frobenius(B_orig, data.B_true);
  if (data.Sigma_true.size())
    summary["loss_Sigma"] =
        loss_frobenius(unstandardize_covariance(est.Sigma, stats), data.Sigma_true);
  write_json_file(out_dir + "/summary.json", summary);
}

int study_to_dir(const nlohmann::json& study_json, const std::string& out_dir,
                 int threads_override) {
  StudyConfig cfg = study_config_from_json(study_json);
  if (threads_override > 0) cfg.threads = threads_override;
  const std::vector<ReplicateResult> results = run_replicate_study(cfg);
  std::filesystem::create_directories(out_dir);
  write_study_results_csv(out_dir + "/results.csv", results, cfg.design.q);
  write_study_timings_csv(out_dir + "/timings.csv", results);
  write_json_file(out_dir + "/summary.json", study_summary(results));
  int errors = 0;
  for (const auto& r : results)
    if (!r.ok()) ++errors;
  return errors;
}

void ingest_to_dir(const std::string& csv_path, const nlohmann::json& spec_json,
                   const std::string& out_dir) {
  const RawTable table = load_table(csv_path);
  const IngestSpec spec = ingest_spec_from_json(spec_json);
  const IngestResult r = standardize(table, spec);
  std::filesystem::create_directories(out_dir);
  write_matrix_csv(out_dir + "/X_train.csv", r.train.X_raw, r.predictor_names);
  write_matrix_csv(out_dir + "/Y_train.csv", r.train.Y_raw, r.response_names);
  write_matrix_csv(out_dir + "/X_test.csv", r.test.X_raw, r.predictor_names);
  write_matrix_csv(out_dir + "/Y_test.csv", r.test.Y_raw, r.response_names);
  nlohmann::json meta = to_json(spec);
  meta["source"] = csv_path;
  meta["n_train"] = r.train.n();
  meta["n_test"] = static_cast<int>(r.test.Y_raw.rows());
  meta["p"] = r.train.p();
  meta["q"] = r.train.q();
  write_json_file(out_dir + "/ingest.json", meta);
  const CorrelationReport rep = correlation_report(r.train.X_raw);
  write_json_file(out_dir + "/correlation.json",
                  {{"max_abs_correlation", rep.max_abs_correlation},
                   {"fraction_at_least_threshold", rep.fraction_at_least_threshold},
                   {"threshold", rep.threshold},
                   {"pairs", rep.pairs}});
}

void report_to_dir(const std::string& results_csv, const std::string& out_dir) {
  const std::vector<ReplicateResult> results = read_study_results_csv(results_csv);
  if (results.empty()) throw std::runtime_error("report: no result rows in '" + results_csv + "'");
  std::filesystem::create_directories(out_dir);
  const nlohmann::json summary = study_summary(results);
  write_json_file(out_dir + "/summary.json", summary);

  // box-plot data, one row per (n, method, metric)
  std::ofstream box(out_dir + "/boxplot.csv");
  if (!box) throw std::runtime_error("cannot open '" + out_dir + "/boxplot.csv'");
  box << "n,method,metric,median,q1,q3,whisker_low,whisker_high,count,errors\n";
  for (const auto& g : summary.at("groups")) {
    for (const char* metric : {"loss_B", "loss_Sigma", "loss_pred"}) {
      if (!g.contains(metric)) continue;
      const auto& s = g.at(metric);
      box << g.at("n").get<int>() << ',' << g.at("method").get<std::string>() << ','
          << metric << ',' << format_double(s.at("median").get<double>()) << ','
          << format_double(s.at("q1").get<double>()) << ','
          << format_double(s.at("q3").get<double>()) << ','
          << format_double(s.at("whisker_low").get<double>()) << ','
          << format_double(s.at("whisker_high").get<double>()) << ','
          << s.at("count").get<long>() << ',' << g.at("errors").get<long>() << '\n';
    }
  }

  // per-response RMSE medians, one row per (n, method)
  size_t q = 0;
  for (const auto& g : summary.at("groups"))
    if (g.contains("rmse_median")) q = std::max(q, g.at("rmse_median").size());
  std::ofstream rmse(out_dir + "/rmse_table.csv");
  if (!rmse) throw std::runtime_error("cannot open '" + out_dir + "/rmse_table.csv'");
  rmse << "n,method";
  for (size_t k = 1; k <= q; ++k) rmse << ",rmse_" << k;
  rmse << '\n';
  for (const auto& g : summary.at("groups")) {
    if (!g.contains("rmse_median")) continue;
    rmse << g.at("n").get<int>() << ',' << g.at("method").get<std::string>();
    for (const auto& v : g.at("rmse_median")) rmse << ',' << format_double(v.get<double>());
    rmse << '\n';
  }
}

} // namespace bmvr
