#include "bmvr.h"

#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>

#include "pipeline.hpp"

struct bmvr_dataset {
  bmvr::SimData data;
};

struct bmvr_chain {
  bmvr::ChainOutput chain;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return BMVR_OK;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return BMVR_ERR_INVALID_ARGUMENT;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return BMVR_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BMVR_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return BMVR_ERR_RUNTIME;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

nlohmann::json parse_json_arg(const char* s) {
  if (s == nullptr || *s == '\0') return nlohmann::json::object();
  return nlohmann::json::parse(s);
}

std::string string_arg(const char* s, const char* what) {
  require(s != nullptr && *s != '\0', what);
  return s;
}

bmvr::PosteriorEstimates chain_estimates(const bmvr_chain* chain,
                                         const bmvr_dataset* data,
                                         const char* statistic) {
  require(chain != nullptr, "chain must not be null");
  require(data != nullptr, "data must not be null");
  const bmvr::SummaryStatistic stat = bmvr::summary_statistic_from_string(
      string_arg(statistic, "statistic must not be null"));
  return bmvr::estimate_from_chain(chain->chain, data->data.train, stat);
}

} // namespace

extern "C" {

int bmvr_version(char* buf, size_t len) {
  static const char kVersion[] = BMVR_VERSION_STRING;
  const int need = static_cast<int>(sizeof(kVersion) - 1);
  if (buf == nullptr || len < sizeof(kVersion)) return need;
  std::memcpy(buf, kVersion, sizeof(kVersion));
  return need;
}

const char* bmvr_last_error(void) { return g_last_error.c_str(); }

int bmvr_simulate(const char* design_json, bmvr_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    auto handle = std::make_unique<bmvr_dataset>();
    handle->data = bmvr::generate(bmvr::sim_design_from_json(parse_json_arg(design_json)));
    *out = handle.release();
  });
}

int bmvr_ingest(const char* csv_path, const char* spec_json, bmvr_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const bmvr::RawTable table =
        bmvr::load_table(string_arg(csv_path, "csv_path must not be null"));
    const bmvr::IngestSpec spec =
        bmvr::ingest_spec_from_json(parse_json_arg(spec_json));
    const bmvr::IngestResult r = bmvr::standardize(table, spec);
    auto handle = std::make_unique<bmvr_dataset>();
    handle->data.train = r.train;
    handle->data.test = r.test;
    *out = handle.release();
  });
}

int bmvr_dataset_load(const char* dir, bmvr_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    auto handle = std::make_unique<bmvr_dataset>();
    handle->data = bmvr::load_dataset_dir(string_arg(dir, "dir must not be null"));
    *out = handle.release();
  });
}

int bmvr_dataset_save(const bmvr_dataset* data, const char* dir) {
  return guarded([&] {
    require(data != nullptr, "data must not be null");
    bmvr::SimDesign design; // dims recorded for the sidecar
    design.n = data->data.train.n();
    design.n_test = static_cast<int>(data->data.test.Y_raw.rows());
    design.p = data->data.train.p();
    design.q = data->data.train.q();
    bmvr::save_simdata(string_arg(dir, "dir must not be null"), data->data, design);
  });
}

int bmvr_dataset_dims(const bmvr_dataset* data, int* n_train, int* n_test, int* p,
                      int* q) {
  return guarded([&] {
    require(data != nullptr, "data must not be null");
    if (n_train) *n_train = data->data.train.n();
    if (n_test) *n_test = static_cast<int>(data->data.test.Y_raw.rows());
    if (p) *p = data->data.train.p();
    if (q) *q = data->data.train.q();
  });
}

void bmvr_dataset_free(bmvr_dataset* data) { delete data; }

int bmvr_fit(const bmvr_dataset* data, const char* method, const char* config_json,
             uint64_t seed, bmvr_chain** out) {
  return guarded([&] {
    require(data != nullptr, "data must not be null");
    require(out != nullptr, "out must not be null");
    auto handle = std::make_unique<bmvr_chain>();
    handle->chain = bmvr::run_method(string_arg(method, "method must not be null"),
                                     data->data.train, parse_json_arg(config_json),
                                     seed);
    *out = handle.release();
  });
}

int bmvr_chain_info(const bmvr_chain* chain, int* retained, int* p, int* q) {
  return guarded([&] {
    require(chain != nullptr, "chain must not be null");
    if (retained) *retained = chain->chain.retained();
    if (p) *p = chain->chain.B.empty() ? 0 : static_cast<int>(chain->chain.B.front().rows());
    if (q) *q = chain->chain.B.empty() ? 0 : static_cast<int>(chain->chain.B.front().cols());
  });
}

int bmvr_chain_estimate(const bmvr_chain* chain, const bmvr_dataset* data,
                        const char* statistic, int original, double* B,
                        double* Sigma) {
  return guarded([&] {
    bmvr::PosteriorEstimates est = chain_estimates(chain, data, statistic);
    if (original) {
      est.B = bmvr::unstandardize_coefficients(est.B, data->data.train.stats);
      est.Sigma = bmvr::unstandardize_covariance(est.Sigma, data->data.train.stats);
    }
    if (B) std::memcpy(B, est.B.data(), sizeof(double) * est.B.size());
    if (Sigma) std::memcpy(Sigma, est.Sigma.data(), sizeof(double) * est.Sigma.size());
  });
}

int bmvr_chain_losses(const bmvr_chain* chain, const bmvr_dataset* data,
                      const char* statistic, double* loss_B, double* loss_Sigma,
                      double* loss_pred, double* rmse, size_t rmse_len) {
  return guarded([&] {
    const bmvr::PosteriorEstimates est = chain_estimates(chain, data, statistic);
    const bmvr::SimData& sim = data->data;
    const bmvr::Standardization& stats = sim.train.stats;
    if (loss_B) {
      require(sim.B_true.size() > 0, "dataset carries no B truth");
      *loss_B = bmvr::loss_frobenius(bmvr::unstandardize_coefficients(est.B, stats),
                                     sim.B_true);
    }
    if (loss_Sigma) {
      require(sim.Sigma_true.size() > 0, "dataset carries no Sigma truth");
      *loss_Sigma = bmvr::loss_frobenius(
          bmvr::unstandardize_covariance(est.Sigma, stats), sim.Sigma_true);
    }
    if (loss_pred || rmse) {
      require(sim.test.Y_raw.rows() > 0, "dataset has no test split");
      const bmvr::Matrix yhat =
          bmvr::destandardize_responses(bmvr::predict(est.B, sim.test.X), stats);
      if (loss_pred) *loss_pred = bmvr::loss_frobenius(yhat, sim.test.Y_raw);
      if (rmse) {
        const bmvr::Vector r = bmvr::rmse_per_response(sim.test.Y_raw, yhat);
        require(rmse_len >= static_cast<size_t>(r.size()), "rmse buffer too short");
        std::memcpy(rmse, r.data(), sizeof(double) * r.size());
      }
    }
  });
}

int bmvr_chain_save(const bmvr_chain* chain, const char* dir) {
  return guarded([&] {
    require(chain != nullptr, "chain must not be null");
    bmvr::save_chain(string_arg(dir, "dir must not be null"), chain->chain);
  });
}

void bmvr_chain_free(bmvr_chain* chain) { delete chain; }

int bmvr_cmd_simulate(const char* design_json, const char* out_dir) {
  return guarded([&] {
    bmvr::simulate_to_dir(parse_json_arg(design_json),
                          string_arg(out_dir, "out_dir must not be null"));
  });
}

int bmvr_cmd_fit(const char* dataset_dir, const char* options_json,
                 const char* out_dir) {
  return guarded([&] {
    const nlohmann::json j = parse_json_arg(options_json);
    bmvr::FitOptions opt;
    require(j.contains("method"), "fit options need a \"method\"");
    opt.method = j.at("method").get<std::string>();
    if (j.contains("config")) opt.config = j.at("config");
    if (j.contains("seed")) {
      opt.seed = j.at("seed").get<uint64_t>();
      opt.seed_set = true;
    }
    if (j.contains("iterations")) opt.iterations = j.at("iterations").get<int>();
    if (j.contains("burn_in")) opt.burn_in = j.at("burn_in").get<int>();
    if (j.contains("summary")) opt.summary = j.at("summary").get<std::string>();
    if (j.contains("save_chain")) opt.save_chain = j.at("save_chain").get<bool>();
    for (const auto& item : j.items()) {
      static const char* known[] = {"method",  "config",  "seed",
                                    "iterations", "burn_in", "summary", "save_chain"};
      bool found = false;
      for (const char* k : known) found = found || item.key() == k;
      require(found, "unknown fit option key");
    }
    bmvr::fit_to_dir(string_arg(dataset_dir, "dataset_dir must not be null"), opt,
                     string_arg(out_dir, "out_dir must not be null"));
  });
}

int bmvr_cmd_study(const char* study_json, const char* out_dir, int threads,
                   int* error_rows) {
  return guarded([&] {
    const int errors =
        bmvr::study_to_dir(parse_json_arg(study_json),
                           string_arg(out_dir, "out_dir must not be null"), threads);
    if (error_rows) *error_rows = errors;
  });
}

int bmvr_cmd_ingest(const char* csv_path, const char* spec_json, const char* out_dir) {
  return guarded([&] {
    bmvr::ingest_to_dir(string_arg(csv_path, "csv_path must not be null"),
                        parse_json_arg(spec_json),
                        string_arg(out_dir, "out_dir must not be null"));
  });
}

int bmvr_cmd_report(const char* results_csv, const char* out_dir) {
  return guarded([&] {
    bmvr::report_to_dir(string_arg(results_csv, "results_csv must not be null"),
                        string_arg(out_dir, "out_dir must not be null"));
  });
}

} // extern "C"
