#include "eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "csvio.hpp"
#include "ingest.hpp"

namespace bmvr {

double loss_frobenius(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw std::invalid_argument("loss_frobenius: shape mismatch");
  return frobenius_norm(truth - estimate);
}

Vector rmse_per_response(const Matrix& Ystar, const Matrix& Yhat) {
  if (Ystar.rows() != Yhat.rows() || Ystar.cols() != Yhat.cols())
    throw std::invalid_argument("rmse_per_response: shape mismatch");
  if (Ystar.rows() < 1) throw std::invalid_argument("rmse_per_response: empty input");
  return ((Ystar - Yhat).array().square().colwise().mean()).sqrt().matrix().transpose();
}

double mcse_batch_means(const std::vector<double>& series, int batches) {
  if (batches < 2) throw std::invalid_argument("mcse_batch_means: need >= 2 batches");
  if (series.size() < 2 * static_cast<size_t>(batches))
    throw std::invalid_argument("mcse_batch_means: series shorter than 2*batches");
  const size_t len = series.size() / static_cast<size_t>(batches); // drop remainder
  const size_t used = len * static_cast<size_t>(batches);
  std::vector<double> means(static_cast<size_t>(batches));
  for (size_t b = 0; b < means.size(); ++b) {
    double s = 0.0;
    for (size_t i = b * len; i < (b + 1) * len; ++i) s += series[i];
    means[b] = s / static_cast<double>(len);
  }
  const double grand =
      std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_of_mean = ss / (static_cast<double>(batches) - 1.0) /
                             static_cast<double>(batches);
  (void)used;
  return std::sqrt(var_of_mean);
}

StudyConfig study_config_from_json(const nlohmann::json& j) {
  if (!j.is_object() && !j.is_null())
    throw std::invalid_argument("study: config must be a JSON object");
  static const std::set<std::string> known = {
      "design",    "methods", "replicates", "n_values", "master_seed",
      "iterations", "burn_in", "summary",    "method_configs", "threads"};
  if (j.is_object())
    for (const auto& item : j.items())
      if (!known.count(item.key()))
        throw std::invalid_argument("study: unknown config key '" + item.key() + "'");
  StudyConfig c;
  if (j.is_object()) {
    if (j.contains("design")) {
      const auto& d = j.at("design");
      static const std::set<std::string> dknown = {"p", "q", "rho_x", "rho_eps",
                                                   "n_test"};
      for (const auto& item : d.items())
        if (!dknown.count(item.key()))
          throw std::invalid_argument("study: unknown design key '" + item.key() + "'");
      if (d.contains("p")) c.design.p = d.at("p").get<int>();
      if (d.contains("q")) c.design.q = d.at("q").get<int>();
      if (d.contains("rho_x")) c.design.rho_x = d.at("rho_x").get<double>();
      if (d.contains("rho_eps")) c.design.rho_eps = d.at("rho_eps").get<double>();
      if (d.contains("n_test")) c.design.n_test = d.at("n_test").get<int>();
    }
    if (j.contains("methods"))
      c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
    if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("master_seed"))
      c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("iterations")) c.iterations = j.at("iterations").get<int>();
    if (j.contains("burn_in")) c.burn_in = j.at("burn_in").get<int>();
    if (j.contains("summary")) c.summary = j.at("summary").get<std::string>();
    if (j.contains("method_configs")) c.method_configs = j.at("method_configs");
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  }
  if (c.methods.empty()) throw std::invalid_argument("study: methods must be nonempty");
  for (const auto& m : c.methods)
    if (!is_known_method(m)) throw std::invalid_argument("study: unknown method '" + m + "'");
  if (c.replicates < 1) throw std::invalid_argument("study: replicates must be >= 1");
  if (c.n_values.empty()) throw std::invalid_argument("study: n_values must be nonempty");
  for (int n : c.n_values)
    if (n < 2) throw std::invalid_argument("study: every n must be >= 2");
  summary_statistic_from_string(c.summary); // validates
  return c;
}

nlohmann::json to_json(const StudyConfig& cfg) {
  return {{"design",
           {{"p", cfg.design.p},
            {"q", cfg.design.q},
            {"rho_x", cfg.design.rho_x},
            {"rho_eps", cfg.design.rho_eps},
            {"n_test", cfg.design.n_test}}},
          {"methods", cfg.methods},
          {"replicates", cfg.replicates},
          {"n_values", cfg.n_values},
          {"master_seed", cfg.master_seed},
          {"iterations", cfg.iterations},
          {"burn_in", cfg.burn_in},
          {"summary", cfg.summary},
          {"method_configs", cfg.method_configs},
          {"threads", cfg.threads}};
}

ReplicateResult evaluate_method(const std::string& method, const SimData& sim,
                                const nlohmann::json& method_config,
                                std::uint64_t method_seed, int iterations, int burn_in,
                                SummaryStatistic stat) {
  ReplicateResult res;
  res.method = method;
  const auto t0 = std::chrono::steady_clock::now();
  const ChainOutput chain =
      run_method(method, sim.train, method_config, method_seed, iterations, burn_in);
  const PosteriorEstimates est = estimate_from_chain(chain, sim.train, stat);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Standardization& stats = sim.train.stats;
  const Matrix B_orig = unstandardize_coefficients(est.B, stats);
  const Matrix Sigma_orig = unstandardize_covariance(est.Sigma, stats);
  const Matrix Yhat_raw =
      destandardize_responses(predict(est.B, sim.test.X), stats);
  if (sim.B_true.size()) res.loss_B = loss_frobenius(B_orig, sim.B_true);
  if (sim.Sigma_true.size()) res.loss_Sigma = loss_frobenius(Sigma_orig, sim.Sigma_true);
  res.loss_pred = loss_frobenius(Yhat_raw, sim.test.Y_raw);
  res.rmse = rmse_per_response(sim.test.Y_raw, Yhat_raw);
  return res;
}

std::vector<ReplicateResult> run_replicate_study(const StudyConfig& cfg) {
  const SummaryStatistic stat = summary_statistic_from_string(cfg.summary);
  const size_t n_methods = cfg.methods.size();
  const size_t total = cfg.n_values.size() * static_cast<size_t>(cfg.replicates) * n_methods;
  std::vector<ReplicateResult> results(total);
  const RngStream master(cfg.master_seed);

  struct Task {
    size_t n_idx;
    int replicate; // 1-based
  };
  std::vector<Task> tasks;
  for (size_t ni = 0; ni < cfg.n_values.size(); ++ni)
    for (int r = 1; r <= cfg.replicates; ++r) tasks.push_back({ni, r});

  auto run_task = [&](const Task& task) {
    const int n = cfg.n_values[task.n_idx];
    const size_t base =
        (task.n_idx * static_cast<size_t>(cfg.replicates) +
         static_cast<size_t>(task.replicate - 1)) *
        n_methods;
    for (size_t mi = 0; mi < n_methods; ++mi) {
      auto& slot = results[base + mi];
      slot.n = n;
      slot.replicate = task.replicate;
      slot.method = cfg.methods[mi];
      slot.rmse = Vector::Zero(cfg.design.q);
    }
    SimData sim;
    try {
      SimDesign design = cfg.design;
      design.n = n;
      design.seed =
          master.derive(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(task.replicate), 0)
              .seed();
      sim = generate(design);
    } catch (const std::exception& e) {
      for (size_t mi = 0; mi < n_methods; ++mi)
        results[base + mi].status = std::string("error: ") + e.what();
      return;
    }
    for (size_t mi = 0; mi < n_methods; ++mi) {
      const std::string& method = cfg.methods[mi];
      auto& slot = results[base + mi];
      try {
        const std::uint64_t method_seed =
            master
                .derive(static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(task.replicate), hash_string(method.c_str()))
                .seed();
        const nlohmann::json mc = cfg.method_configs.contains(method)
                                      ? cfg.method_configs.at(method)
                                      : nlohmann::json::object();
        ReplicateResult r =
            evaluate_method(method, sim, mc, method_seed, cfg.iterations, cfg.burn_in, stat);
        r.n = slot.n;
        r.replicate = slot.replicate;
        slot = std::move(r);
      } catch (const std::exception& e) {
        slot.status = std::string("error: ") + e.what();
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  size_t nthreads = cfg.threads > 0 ? static_cast<size_t>(cfg.threads)
                                    : static_cast<size_t>(hw ? hw : 1);
  nthreads = std::min(nthreads, tasks.size());
  if (nthreads <= 1) {
    for (const Task& t : tasks) run_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t i = 0; i < nthreads; ++i)
      pool.emplace_back([&] {
        for (size_t t = next++; t < tasks.size(); t = next++) run_task(tasks[t]);
      });
    for (auto& th : pool) th.join();
  }
  return results;
}

namespace {

std::string sanitize_field(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

double parse_loss_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

} // namespace

void write_study_results_csv(const std::string& path,
                             const std::vector<ReplicateResult>& results, int q) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "n,replicate,method,loss_B,loss_Sigma,loss_pred";
  for (int k = 1; k <= q; ++k) out << ",rmse_" << k;
  // The seconds column is part of the schema but left empty so that reruns with
  // the same master seed are byte-identical; measured times go to timings.csv.
  out << ",seconds,status\n";
  for (const auto& r : results) {
    out << r.n << ',' << r.replicate << ',' << r.method << ',';
    if (r.ok()) {
      out << format_double(r.loss_B) << ',' << format_double(r.loss_Sigma) << ','
          << format_double(r.loss_pred);
      for (int k = 0; k < q; ++k)
        out << ',' << format_double(k < r.rmse.size() ? r.rmse(k) : 0.0);
    } else {
      out << ",,";
      for (int k = 0; k < q; ++k) out << ',';
    }
    out << ",," << sanitize_field(r.status) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_study_timings_csv(const std::string& path,
                             const std::vector<ReplicateResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "n,replicate,method,seconds\n";
  for (const auto& r : results)
    out << r.n << ',' << r.replicate << ',' << r.method << ','
        << format_double(r.seconds) << '\n';
}

std::vector<ReplicateResult> read_study_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty results file '" + path + "'");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  int q = 0;
  for (const auto& h : header)
    if (h.rfind("rmse_", 0) == 0) ++q;
  const size_t expected = 6 + static_cast<size_t>(q) + 2; // + seconds, status
  if (header.size() != expected)
    throw std::runtime_error("unexpected results header in '" + path + "'");
  std::vector<ReplicateResult> out;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    while (f.size() < expected) f.emplace_back(); // trailing empties
    ReplicateResult r;
    r.n = std::stoi(f[0]);
    r.replicate = std::stoi(f[1]);
    r.method = f[2];
    r.loss_B = parse_loss_field(f[3]);
    r.loss_Sigma = parse_loss_field(f[4]);
    r.loss_pred = parse_loss_field(f[5]);
    r.rmse = Vector::Zero(q);
    for (int k = 0; k < q; ++k) r.rmse(k) = parse_loss_field(f[6 + static_cast<size_t>(k)]);
    r.seconds = parse_loss_field(f[expected - 2]);
    r.status = f[expected - 1];
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

double quantile_type7(std::vector<double> v, double prob) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = static_cast<size_t>(std::ceil(h));
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

nlohmann::json box_stats(const std::vector<double>& values) {
  const double q1 = quantile_type7(values, 0.25);
  const double med = quantile_type7(values, 0.5);
  const double q3 = quantile_type7(values, 0.75);
  const double iqr = q3 - q1;
  double lo = q3, hi = q1;
  for (double v : values) {
    if (v >= q1 - 1.5 * iqr) lo = std::min(lo, v);
    if (v <= q3 + 1.5 * iqr) hi = std::max(hi, v);
  }
  return {{"median", med}, {"q1", q1},          {"q3", q3},
          {"whisker_low", lo}, {"whisker_high", hi}, {"count", values.size()}};
}

} // namespace

nlohmann::json study_summary(const std::vector<ReplicateResult>& results) {
  // group by (n, method), first-seen order
  std::vector<std::pair<int, std::string>> keys;
  for (const auto& r : results) {
    const std::pair<int, std::string> key{r.n, r.method};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [n, method] : keys) {
    std::vector<double> lb, ls, lp;
    std::vector<std::vector<double>> rmse_cols;
    long errors = 0;
    for (const auto& r : results) {
      if (r.n != n || r.method != method) continue;
      if (!r.ok()) {
        ++errors;
        continue;
      }
      lb.push_back(r.loss_B);
      ls.push_back(r.loss_Sigma);
      lp.push_back(r.loss_pred);
      rmse_cols.resize(static_cast<size_t>(r.rmse.size()));
      for (Eigen::Index k = 0; k < r.rmse.size(); ++k)
        rmse_cols[static_cast<size_t>(k)].push_back(r.rmse(k));
    }
    nlohmann::json g{{"n", n}, {"method", method}, {"errors", errors}};
    if (!lb.empty()) {
      g["loss_B"] = box_stats(lb);
      g["loss_Sigma"] = box_stats(ls);
      g["loss_pred"] = box_stats(lp);
      std::vector<double> rmse_median;
      for (auto& col : rmse_cols) rmse_median.push_back(quantile_type7(col, 0.5));
      g["rmse_median"] = rmse_median;
    }
    groups.push_back(std::move(g));
  }
  return {{"groups", groups}};
}

} // namespace bmvr
