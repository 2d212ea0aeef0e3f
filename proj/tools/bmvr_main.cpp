// bmvr command-line front end: simulate | fit | study | ingest | report.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure,
// 3 study completed with failed replicates.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bmvr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

std::string library_version() {
  char buf[32];
  bmvr_version(buf, sizeof buf);
  return buf;
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --out resolution: relative paths land under $BMVR_OUT_ROOT when set.
std::string resolve_out(const std::string& out, const char* fallback) {
  namespace fs = std::filesystem;
  fs::path p = out.empty() ? fs::path(fallback) : fs::path(out);
  const char* root = std::getenv("BMVR_OUT_ROOT");
  if (p.is_relative() && root != nullptr && *root != '\0') p = fs::path(root) / p;
  return p.string();
}

int fail(const char* stage, int code) {
  std::fprintf(stderr, "bmvr: %s failed: %s\n", stage, bmvr_last_error());
  return code == BMVR_ERR_INVALID_ARGUMENT ? kExitConfig : kExitRuntime;
}

bool load_config_file(const std::string& path, nlohmann::json& out) {
  if (path.empty()) {
    out = nlohmann::json::object();
    return true;
  }
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "bmvr: cannot open config '%s'\n", path.c_str());
    return false;
  }
  try {
    out = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bmvr: config '%s' is not valid JSON: %s\n", path.c_str(),
                 e.what());
    return false;
  }
  return true;
}

// Written at run end; the rename makes the write atomic.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& config_path, const nlohmann::json& seed,
                    const std::string& started) {
  namespace fs = std::filesystem;
  nlohmann::json m{{"command", command},
                   {"config", config_path},
                   {"master_seed", seed},
                   {"out_dir", out_dir},
                   {"tool_version", library_version()},
                   {"started", started},
                   {"finished", timestamp_utc()}};
  fs::create_directories(out_dir);
  const fs::path tmp = fs::path(out_dir) / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    out << m.dump(2) << '\n';
  }
  fs::rename(tmp, fs::path(out_dir) / "manifest.json");
}

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int iterations = -1;
  int burn_in = -1;
  std::string summary;
  int threads = 0;
};

void add_seed_flag(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&f](const std::uint64_t& v) {
           f.seed = v;
           f.seed_set = true;
         },
         "Master seed (overrides the config file)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multivariate regression with variable selection"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  CommonFlags sim, fit, study, ingest, report;
  std::string fit_method, fit_data, ingest_input, report_input;
  bool fit_no_chain = false;

  CLI::App* c_sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  c_sim->add_option("--config", sim.config_path, "Design JSON (n, n_test, p, q, rho_x, rho_eps, seed)");
  c_sim->add_option("--out", sim.out, "Output directory");
  add_seed_flag(c_sim, sim);

  CLI::App* c_fit = app.add_subcommand("fit", "Fit one estimator to a dataset directory");
  c_fit->add_option("--method", fit_method, "dss | twostep | dhs | mbsp")->required();
  c_fit->add_option("--data", fit_data, "Dataset directory (from simulate/ingest)")->required();
  c_fit->add_option("--config", fit.config_path, "Method config JSON");
  c_fit->add_option("--out", fit.out, "Output directory");
  c_fit->add_option("--iterations", fit.iterations, "MCMC iterations (overrides config)");
  c_fit->add_option("--burn-in", fit.burn_in, "Burn-in iterations (overrides config)");
  c_fit->add_option("--summary", fit.summary, "mean | median")
      ->check(CLI::IsMember({"mean", "median"}));
  c_fit->add_flag("--no-save-chain", fit_no_chain, "Skip writing the draw files");
  add_seed_flag(c_fit, fit);

  CLI::App* c_study = app.add_subcommand("study", "Replicate study over methods and sample sizes");
  c_study->add_option("--config", study.config_path, "Study config JSON");
  c_study->add_option("--out", study.out, "Output directory");
  c_study->add_option("--iterations", study.iterations, "MCMC iterations (overrides config)");
  c_study->add_option("--burn-in", study.burn_in, "Burn-in iterations (overrides config)");
  c_study->add_option("--threads", study.threads, "Replicate-level parallelism (default: all cores)");
  c_study->add_option("--summary", study.summary, "mean | median")
      ->check(CLI::IsMember({"mean", "median"}));
  add_seed_flag(c_study, study);

  CLI::App* c_ingest = app.add_subcommand("ingest", "Build a dataset directory from a raw CSV");
  c_ingest->add_option("--input", ingest_input, "Raw CSV with header")->required();
  c_ingest->add_option("--config", ingest.config_path, "Ingest spec JSON")->required();
  c_ingest->add_option("--out", ingest.out, "Output directory");

  CLI::App* c_report = app.add_subcommand("report", "Aggregate a study results.csv");
  c_report->add_option("--input", report_input, "results.csv from a study run")->required();
  c_report->add_option("--out", report.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string started = timestamp_utc();

  if (c_sim->parsed()) {
    nlohmann::json design;
    if (!load_config_file(sim.config_path, design)) return kExitConfig;
    if (sim.seed_set) design["seed"] = sim.seed;
    const std::string out = resolve_out(sim.out, "simulate");
    const int rc = bmvr_cmd_simulate(design.dump().c_str(), out.c_str());
    if (rc != BMVR_OK) return fail("simulate", rc);
    write_manifest(out, "simulate", sim.config_path, design.value("seed", 1ULL), started);
    std::printf("simulate: wrote dataset to %s\n", out.c_str());
    return kExitOk;
  }

  if (c_fit->parsed()) {
    nlohmann::json config;
    if (!load_config_file(fit.config_path, config)) return kExitConfig;
    nlohmann::json options{{"method", fit_method}, {"config", config}};
    if (fit.seed_set) options["seed"] = fit.seed;
    if (fit.iterations > 0) options["iterations"] = fit.iterations;
    if (fit.burn_in >= 0) options["burn_in"] = fit.burn_in;
    if (!fit.summary.empty()) options["summary"] = fit.summary;
    if (fit_no_chain) options["save_chain"] = false;
    const std::string out = resolve_out(fit.out, "fit");
    const int rc = bmvr_cmd_fit(fit_data.c_str(), options.dump().c_str(), out.c_str());
    if (rc != BMVR_OK) return fail("fit", rc);
    nlohmann::json seed_used;
    if (fit.seed_set) seed_used = fit.seed;
    else if (config.contains("seed")) seed_used = config["seed"];
    else seed_used = 1;
    write_manifest(out, "fit", fit.config_path, seed_used, started);
    std::printf("fit: %s finished, outputs in %s\n", fit_method.c_str(), out.c_str());
    return kExitOk;
  }

  if (c_study->parsed()) {
    nlohmann::json config;
    if (!load_config_file(study.config_path, config)) return kExitConfig;
    if (study.seed_set) config["master_seed"] = study.seed;
    if (study.iterations > 0) config["iterations"] = study.iterations;
    if (study.burn_in >= 0) config["burn_in"] = study.burn_in;
    if (!study.summary.empty()) config["summary"] = study.summary;
    const std::string out = resolve_out(study.out, "study");
    int error_rows = 0;
    const int rc =
        bmvr_cmd_study(config.dump().c_str(), out.c_str(), study.threads, &error_rows);
    if (rc != BMVR_OK) return fail("study", rc);
    write_manifest(out, "study", study.config_path, config.value("master_seed", 1ULL),
                   started);
    if (error_rows > 0) {
      std::fprintf(stderr, "study: completed with %d failed replicate rows (see %s/results.csv)\n",
                   error_rows, out.c_str());
      return kExitPartial;
    }
    std::printf("study: results in %s\n", out.c_str());
    return kExitOk;
  }

  if (c_ingest->parsed()) {
    nlohmann::json spec;
    if (!load_config_file(ingest.config_path, spec)) return kExitConfig;
    const std::string out = resolve_out(ingest.out, "ingest");
    const int rc = bmvr_cmd_ingest(ingest_input.c_str(), spec.dump().c_str(), out.c_str());
    if (rc != BMVR_OK) return fail("ingest", rc);
    write_manifest(out, "ingest", ingest.config_path, nlohmann::json(), started);
    std::printf("ingest: wrote dataset to %s\n", out.c_str());
    return kExitOk;
  }

  // report
  const std::string out = resolve_out(report.out, "report");
  const int rc = bmvr_cmd_report(report_input.c_str(), out.c_str());
  if (rc != BMVR_OK) return fail("report", rc);
  write_manifest(out, "report", "", nlohmann::json(), started);
  std::printf("report: aggregates in %s\n", out.c_str());
  return kExitOk;
}
