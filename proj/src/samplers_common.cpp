#include "samplers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "samplers_detail.hpp"

namespace bmvr {

double mbsp_default_tau(int n, int p) {
  if (n < 2 || p < 1) throw std::invalid_argument("mbsp_default_tau: need n >= 2, p >= 1");
  return 1.0 / (static_cast<double>(p) * std::sqrt(n * std::log(static_cast<double>(n))));
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const char* what) {
  if (!j.is_object() && !j.is_null())
    throw std::invalid_argument(std::string(what) + ": config must be a JSON object");
  if (j.is_null()) return;
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw std::invalid_argument(std::string(what) + ": unknown config key '" +
                                  item.key() + "'");
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) out = j.at(key).get<T>();
}

void read_common(const nlohmann::json& j, int& iterations, int& burn_in,
                 std::uint64_t& seed, int& thin) {
  read_key(j, "iterations", iterations);
  read_key(j, "burn_in", burn_in);
  read_key(j, "seed", seed);
  read_key(j, "thin", thin);
}

void check_chain_lengths(int iterations, int burn_in, int thin, const char* what) {
  if (burn_in < 0 || iterations <= burn_in)
    throw std::invalid_argument(std::string(what) + ": need 0 <= burn_in < iterations");
  if (thin < 1) throw std::invalid_argument(std::string(what) + ": need thin >= 1");
}

} // namespace

DssConfig dss_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"iw_df", "iw_scale_multiplier", "slab_variance",
                       "inclusion_probability", "iterations", "burn_in", "seed",
                       "random_scan", "thin"},
                      "dss");
  DssConfig c;
  read_key(j, "iw_df", c.iw_df);
  read_key(j, "iw_scale_multiplier", c.iw_scale_multiplier);
  read_key(j, "slab_variance", c.slab_variance);
  read_key(j, "inclusion_probability", c.inclusion_probability);
  read_key(j, "random_scan", c.random_scan);
  read_common(j, c.iterations, c.burn_in, c.seed, c.thin);
  detail::check_positive(c.iw_scale_multiplier, "dss", "iw_scale_multiplier");
  detail::check_positive(c.slab_variance, "dss", "slab_variance");
  detail::check_probability(c.inclusion_probability, "dss", "inclusion_probability");
  check_chain_lengths(c.iterations, c.burn_in, c.thin, "dss");
  return c;
}

TwoStepConfig twostep_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"precision_shape", "precision_rate", "slab_variance",
                       "inclusion_probability", "iw_df", "iw_scale_multiplier",
                       "iterations", "burn_in", "seed", "thin"},
                      "twostep");
  TwoStepConfig c;
  read_key(j, "precision_shape", c.precision_shape);
  read_key(j, "precision_rate", c.precision_rate);
  read_key(j, "slab_variance", c.slab_variance);
  read_key(j, "inclusion_probability", c.inclusion_probability);
  read_key(j, "iw_df", c.iw_df);
  read_key(j, "iw_scale_multiplier", c.iw_scale_multiplier);
  read_common(j, c.iterations, c.burn_in, c.seed, c.thin);
  detail::check_positive(c.precision_shape, "twostep", "precision_shape");
  detail::check_positive(c.precision_rate, "twostep", "precision_rate");
  detail::check_positive(c.iw_scale_multiplier, "twostep", "iw_scale_multiplier");
  detail::check_positive(c.slab_variance, "twostep", "slab_variance");
  detail::check_probability(c.inclusion_probability, "twostep",
                            "inclusion_probability");
  check_chain_lengths(c.iterations, c.burn_in, c.thin, "twostep");
  return c;
}

DhsConfig dhs_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"iw_df", "iw_scale_multiplier", "iterations", "burn_in",
                       "seed", "thin", "joint_vec_limit"},
                      "dhs");
  DhsConfig c;
  read_key(j, "iw_df", c.iw_df);
  read_key(j, "iw_scale_multiplier", c.iw_scale_multiplier);
  read_key(j, "joint_vec_limit", c.joint_vec_limit);
  read_common(j, c.iterations, c.burn_in, c.seed, c.thin);
  detail::check_positive(c.iw_scale_multiplier, "dhs", "iw_scale_multiplier");
  if (c.joint_vec_limit < 0)
    throw std::invalid_argument("dhs: joint_vec_limit must be nonnegative");
  check_chain_lengths(c.iterations, c.burn_in, c.thin, "dhs");
  return c;
}

MbspConfig mbsp_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"global_tau", "iw_df", "iw_scale_multiplier", "iterations",
                       "burn_in", "seed", "thin"},
                      "mbsp");
  MbspConfig c;
  read_key(j, "global_tau", c.global_tau);
  read_key(j, "iw_df", c.iw_df);
  read_key(j, "iw_scale_multiplier", c.iw_scale_multiplier);
  read_common(j, c.iterations, c.burn_in, c.seed, c.thin);
  // global_tau <= 0 is valid here: it selects the data-dependent default
  detail::check_positive(c.iw_scale_multiplier, "mbsp", "iw_scale_multiplier");
  check_chain_lengths(c.iterations, c.burn_in, c.thin, "mbsp");
  return c;
}

nlohmann::json to_json(const DssConfig& c) {
  return {{"iw_df", c.iw_df},
          {"iw_scale_multiplier", c.iw_scale_multiplier},
          {"slab_variance", c.slab_variance},
          {"inclusion_probability", c.inclusion_probability},
          {"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"seed", c.seed},
          {"random_scan", c.random_scan},
          {"thin", c.thin}};
}

nlohmann::json to_json(const TwoStepConfig& c) {
  return {{"precision_shape", c.precision_shape},
          {"precision_rate", c.precision_rate},
          {"slab_variance", c.slab_variance},
          {"inclusion_probability", c.inclusion_probability},
          {"iw_df", c.iw_df},
          {"iw_scale_multiplier", c.iw_scale_multiplier},
          {"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"seed", c.seed},
          {"thin", c.thin}};
}

nlohmann::json to_json(const DhsConfig& c) {
  return {{"iw_df", c.iw_df},
          {"iw_scale_multiplier", c.iw_scale_multiplier},
          {"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"seed", c.seed},
          {"thin", c.thin},
          {"joint_vec_limit", c.joint_vec_limit}};
}

nlohmann::json to_json(const MbspConfig& c) {
  return {{"global_tau", c.global_tau},
          {"iw_df", c.iw_df},
          {"iw_scale_multiplier", c.iw_scale_multiplier},
          {"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"seed", c.seed},
          {"thin", c.thin}};
}

namespace detail {

double resolve_iw_df(double iw_df, int q, const char* what) {
  const double df = iw_df < 0 ? q + 2.0 : iw_df;
  if (!(df > q - 1))
    throw std::invalid_argument(std::string(what) + ": iw_df must exceed q - 1");
  return df;
}

void check_positive(double v, const char* what, const char* name) {
  if (!(v > 0))
    throw std::invalid_argument(std::string(what) + ": " + name + " must be positive");
}

void check_probability(double v, const char* what, const char* name) {
  if (!(v > 0 && v < 1))
    throw std::invalid_argument(std::string(what) + ": " + name + " must lie in (0,1)");
}

void check_lengths(int iterations, int burn_in, int thin, const char* what) {
  check_chain_lengths(iterations, burn_in, thin, what);
}

} // namespace detail

SummaryStatistic summary_statistic_from_string(const std::string& s) {
  if (s == "mean") return SummaryStatistic::kMean;
  if (s == "median") return SummaryStatistic::kMedian;
  throw std::invalid_argument("summary statistic must be 'mean' or 'median', got '" + s +
                              "'");
}

Matrix posterior_summary(const std::vector<Matrix>& draws, SummaryStatistic stat) {
  if (draws.empty()) throw std::invalid_argument("posterior_summary: empty chain");
  const Eigen::Index rows = draws.front().rows(), cols = draws.front().cols();
  Matrix out(rows, cols);
  if (stat == SummaryStatistic::kMean) {
    out.setZero();
    for (const Matrix& d : draws) out += d;
    out /= static_cast<double>(draws.size());
    return out;
  }
  std::vector<double> buf(draws.size());
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (size_t t = 0; t < draws.size(); ++t) buf[t] = draws[t](i, j);
      const size_t m = buf.size() / 2;
      std::nth_element(buf.begin(), buf.begin() + m, buf.end());
      double med = buf[m];
      if (buf.size() % 2 == 0) {
        const double lo = *std::max_element(buf.begin(), buf.begin() + m);
        med = 0.5 * (lo + med);
      }
      out(i, j) = med;
    }
  }
  return out;
}

PosteriorEstimates estimate_from_chain(const ChainOutput& chain, const Dataset& data,
                                       SummaryStatistic stat) {
  PosteriorEstimates est;
  est.B = posterior_summary(chain.B, stat);
  if (chain.method == "twostep") {
    est.Sigma = run_twostep_step2(data, est.B).sigma_mean;
  } else {
    if (chain.Sigma.empty())
      throw std::invalid_argument("estimate_from_chain: chain has no Sigma draws");
    est.Sigma = posterior_summary(chain.Sigma, stat);
  }
  return est;
}

bool is_known_method(const std::string& method) {
  return method == "dss" || method == "twostep" || method == "dhs" || method == "mbsp";
}

ChainOutput run_method(const std::string& method, const Dataset& data,
                       const nlohmann::json& config, std::uint64_t seed,
                       int iterations, int burn_in) {
  if (!is_known_method(method))
    throw std::invalid_argument("unknown method '" + method +
                                "' (expected one of dss, twostep, dhs, mbsp)");
  if (method == "dss") {
    DssConfig c = dss_config_from_json(config);
    c.seed = seed;
    if (iterations > 0) c.iterations = iterations;
    if (burn_in >= 0) c.burn_in = burn_in;
    return run_dss(data, c);
  }
  if (method == "twostep") {
    TwoStepConfig c = twostep_config_from_json(config);
    c.seed = seed;
    if (iterations > 0) c.iterations = iterations;
    if (burn_in >= 0) c.burn_in = burn_in;
    return run_twostep_step1(data, c);
  }
  if (method == "dhs") {
    DhsConfig c = dhs_config_from_json(config);
    c.seed = seed;
    if (iterations > 0) c.iterations = iterations;
    if (burn_in >= 0) c.burn_in = burn_in;
    return run_dhs(data, c);
  }
  MbspConfig c = mbsp_config_from_json(config);
  c.seed = seed;
  if (iterations > 0) c.iterations = iterations;
  if (burn_in >= 0) c.burn_in = burn_in;
  return run_mbsp(data, c);
}

} // namespace bmvr
