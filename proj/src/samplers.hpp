#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "distributions.hpp"
#include "model.hpp"

namespace bmvr {

// ---------------------------------------------------------------------------
// Configs.  Negative iw_df / global_tau mean "use the data-dependent default"
// (q+2 and 1/(p*sqrt(n log n)) respectively).
// ---------------------------------------------------------------------------

struct DssConfig {
  double iw_df = -1.0; // default q + 2
  double iw_scale_multiplier = 0.5;
  double slab_variance = 1.0;
  double inclusion_probability = 0.5;
  int iterations = 10000;
  int burn_in = 100;
  std::uint64_t seed = 1;
  bool random_scan = false; // systematic sweep by default
  int thin = 1;
};

struct TwoStepConfig {
  double precision_shape = 1.5;
  double precision_rate = 0.25;
  double slab_variance = 1.0;
  double inclusion_probability = 0.5;
  double iw_df = -1.0; // step-2 default q + 2
  double iw_scale_multiplier = 0.5;
  int iterations = 10000;
  int burn_in = 100;
  std::uint64_t seed = 1;
  int thin = 1;
};

struct DhsConfig {
  double iw_df = -1.0;
  double iw_scale_multiplier = 0.5;
  int iterations = 10000;
  int burn_in = 100;
  std::uint64_t seed = 1;
  int thin = 1;
  int joint_vec_limit = 2000; // joint vec(B) draw when p*q <= limit, else row blocks
};

struct MbspConfig {
  double global_tau = -1.0; // default 1 / (p * sqrt(n * log n))
  double iw_df = -1.0;
  double iw_scale_multiplier = 0.5;
  int iterations = 10000;
  int burn_in = 100;
  std::uint64_t seed = 1;
  int thin = 1;
};

// Shrinkage draws are clamped to this range to keep conditional variances
// inside floating-point comfort under heavy-tailed hyperpriors.
inline constexpr double kShrinkFloor = 1e-12;
inline constexpr double kShrinkCeil = 1e12;

double mbsp_default_tau(int n, int p);

// JSON <-> config (unknown keys rejected; missing keys keep defaults).
DssConfig dss_config_from_json(const nlohmann::json& j);
TwoStepConfig twostep_config_from_json(const nlohmann::json& j);
DhsConfig dhs_config_from_json(const nlohmann::json& j);
MbspConfig mbsp_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DssConfig& c);
nlohmann::json to_json(const TwoStepConfig& c);
nlohmann::json to_json(const DhsConfig& c);
nlohmann::json to_json(const MbspConfig& c);

// ---------------------------------------------------------------------------
// dss: joint spike-and-slab Gibbs with non-diagonal error covariance.
// ---------------------------------------------------------------------------

class DssSampler {
 public:
  DssSampler(const Dataset& data, const DssConfig& cfg);

  // Single-site update of (gamma_jk, B_jk): gamma drawn from its full
  // conditional with B_jk integrated out (log-space Bayes factor), then B_jk
  // from the slab's normal full conditional or set to exactly 0.
  void update_coefficient(int j, int k);
  // Sigma | B ~ InverseWishart(iw_df + n, scale_multiplier*I + E'E).
  void update_sigma();
  void sweep(); // all (j,k) sites then Sigma

  ChainOutput run();

  const Matrix& B() const { return B_; }
  const Matrix& Gamma() const { return Gamma_; }
  const Matrix& Sigma() const { return Sigma_; }
  RngStream& rng() { return rng_; }
  void set_state(const Matrix& B, const Matrix& Gamma, const Matrix& Sigma);
  void set_response(const Matrix& Y); // swaps Y in place (Geweke-style reuse)

 private:
  void refresh_residuals();

  Matrix X_, Y_;
  int n_, p_, q_;
  DssConfig cfg_;
  double prior_df_;
  RngStream rng_;
  Vector xtx_diag_;
  Matrix B_, Gamma_, Sigma_, Omega_, E_; // E = Y - X*B, kept incrementally
};

ChainOutput run_dss(const Dataset& data, const DssConfig& cfg);

// ---------------------------------------------------------------------------
// twostep: per-response univariate spike-and-slab chains (step 1), then a
// closed-form inverse-Wishart posterior for Sigma from step-1 residuals.
// ---------------------------------------------------------------------------

class UnivariateSsvsSampler {
 public:
  // Spike-and-slab regression of y on X with error variance sigma2 and
  // precision prior 1/sigma2 ~ Gamma(shape, rate).
  UnivariateSsvsSampler(const Matrix& X, const Vector& y, const TwoStepConfig& cfg,
                        RngStream rng);

  void update_coefficient(int j);
  void update_sigma2(); // conjugate gamma draw of the precision
  void sweep();

  const Vector& beta() const { return beta_; }
  const Vector& gamma() const { return gamma_; }
  double sigma2() const { return sigma2_; }

 private:
  Matrix X_;
  Vector y_;
  int n_, p_;
  TwoStepConfig cfg_;
  RngStream rng_;
  Vector xtx_diag_;
  Vector beta_, gamma_, r_; // r = y - X*beta
  double sigma2_;
};

ChainOutput run_twostep_step1(const Dataset& data, const TwoStepConfig& cfg);

struct TwoStepSigma {
  Matrix sigma_mean;     // (scale_multiplier*I + S_n) / (n + 1): the posterior mean
  double posterior_df;   // iw_df + n
  Matrix posterior_scale; // scale_multiplier*I + S_n
};

// Deterministic step 2: S_n from residuals of B_hat on the dataset.
TwoStepSigma run_twostep_step2(const Dataset& data, const Matrix& B_hat,
                               double iw_df = -1.0, double iw_scale_multiplier = 0.5);

// ---------------------------------------------------------------------------
// dhs: independent horseshoe shrinkage, B_jk ~ N(0, xi_jk * tau_k), with
// half-Cauchy hyperpriors realized through inverse-gamma auxiliaries.
// ---------------------------------------------------------------------------

class DhsSampler {
 public:
  DhsSampler(const Dataset& data, const DhsConfig& cfg);

  void update_coefficients(); // joint vec(B) draw (or row blocks past the limit)
  void update_local_scales(); // xi, nu, tau, phi inverse-gamma sweeps
  void update_sigma();
  void sweep();

  ChainOutput run();

  const Matrix& B() const { return B_; }
  const Matrix& Sigma() const { return Sigma_; }
  const Matrix& Xi() const { return Xi_; }
  const Vector& Tau() const { return tau_; }
  RngStream& rng() { return rng_; }
  void set_state(const Matrix& B, const Matrix& Sigma, const Matrix& Xi,
                 const Matrix& Nu, const Vector& tau, const Vector& phi);
  void set_response(const Matrix& Y);

 private:
  Matrix X_, Y_;
  int n_, p_, q_;
  DhsConfig cfg_;
  double prior_df_;
  RngStream rng_;
  Matrix G_; // X'X
  Matrix B_, Sigma_, Omega_;
  Matrix Xi_, Nu_; // p x q local scales and auxiliaries
  Vector tau_, phi_; // per-response global scales and auxiliaries
};

ChainOutput run_dhs(const Dataset& data, const DhsConfig& cfg);

// ---------------------------------------------------------------------------
// mbsp: matrix-normal global-local shrinkage, B ~ MN(0, tau*diag(psi), Sigma),
// horseshoe local scales psi_j, fixed global tau.
// ---------------------------------------------------------------------------

class MbspSampler {
 public:
  MbspSampler(const Dataset& data, const MbspConfig& cfg);

  void update_coefficients(); // closed-form matrix-normal draw
  void update_local_scales(); // psi, zeta inverse-gamma sweeps
  void update_sigma();        // IW with prior contribution B'(tau D)^{-1} B
  void sweep();

  ChainOutput run();

  const Matrix& B() const { return B_; }
  const Matrix& Sigma() const { return Sigma_; }
  const Vector& Psi() const { return psi_; }
  double tau() const { return tau_; }
  RngStream& rng() { return rng_; }
  void set_state(const Matrix& B, const Matrix& Sigma, const Vector& psi,
                 const Vector& zeta);
  void set_response(const Matrix& Y);

 private:
  Matrix X_, Y_;
  int n_, p_, q_;
  MbspConfig cfg_;
  double prior_df_, tau_;
  RngStream rng_;
  Matrix G_;
  Matrix B_, Sigma_, Omega_;
  Vector psi_, zeta_;
};

ChainOutput run_mbsp(const Dataset& data, const MbspConfig& cfg);

// ---------------------------------------------------------------------------
// Posterior summaries and method dispatch.
// ---------------------------------------------------------------------------

enum class SummaryStatistic { kMean, kMedian };

SummaryStatistic summary_statistic_from_string(const std::string& s);

// Elementwise mean or median over a draw sequence.
Matrix posterior_summary(const std::vector<Matrix>& draws, SummaryStatistic stat);

struct PosteriorEstimates {
  Matrix B;     // p x q
  Matrix Sigma; // q x q; for twostep the deterministic step-2 posterior mean
};

// Chain summary plus the per-method Sigma estimate convention (twostep takes
// Sigma from step 2 on the summarized B; samplers summarize their Sigma draws).
PosteriorEstimates estimate_from_chain(const ChainOutput& chain, const Dataset& data,
                                       SummaryStatistic stat);

bool is_known_method(const std::string& method);

// Dispatch on method name with a method-appropriate config parsed from JSON
// (empty json = defaults); `seed` overrides the config seed.
ChainOutput run_method(const std::string& method, const Dataset& data,
                       const nlohmann::json& config, std::uint64_t seed,
                       int iterations = -1, int burn_in = -1);

} // namespace bmvr
