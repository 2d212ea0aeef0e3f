#include <cmath>
#include <stdexcept>

#include "samplers_detail.hpp"

namespace bmvr {

using detail::check_lengths;
using detail::check_positive;
using detail::check_probability;

UnivariateSsvsSampler::UnivariateSsvsSampler(const Matrix& X, const Vector& y,
                                             const TwoStepConfig& cfg, RngStream rng)
    : X_(X),
      y_(y),
      n_(static_cast<int>(X.rows())),
      p_(static_cast<int>(X.cols())),
      cfg_(cfg),
      rng_(rng) {
  if (y_.size() != X_.rows()) throw std::invalid_argument("twostep: X/y row mismatch");
  check_positive(cfg_.precision_shape, "twostep", "precision_shape");
  check_positive(cfg_.precision_rate, "twostep", "precision_rate");
  check_positive(cfg_.slab_variance, "twostep", "slab_variance");
  check_probability(cfg_.inclusion_probability, "twostep", "inclusion_probability");
  xtx_diag_ = X_.colwise().squaredNorm();
  beta_ = Vector::Zero(p_);
  gamma_ = Vector::Zero(p_);
  sigma2_ = cfg_.precision_rate / cfg_.precision_shape; // prior-centered start
  r_ = y_;
}

void UnivariateSsvsSampler::update_coefficient(int j) {
  // q=1 specialization of the dss site update with Omega_kk = 1/sigma2
  const double a = xtx_diag_(j) / sigma2_;
  const double b_old = beta_(j);
  const double c = X_.col(j).dot(r_) / sigma2_ + b_old * a;
  const double v = cfg_.slab_variance;
  const double v_star = 1.0 / (a + 1.0 / v);
  const double m_star = v_star * c;
  const double log_bf = 0.5 * std::log(v_star / v) + 0.5 * c * m_star;
  const double pi = cfg_.inclusion_probability;
  const double logit = std::log(pi / (1.0 - pi)) + log_bf;
  if (!std::isfinite(logit))
    throw std::runtime_error("twostep: non-finite inclusion log-odds (numerical bug)");
  const bool include = rng_.bernoulli(detail::sigmoid(logit));
  const double b_new = include ? m_star + std::sqrt(v_star) * rng_.normal() : 0.0;
  gamma_(j) = include ? 1.0 : 0.0;
  beta_(j) = b_new;
  if (b_new != b_old) r_ += (b_old - b_new) * X_.col(j);
}

void UnivariateSsvsSampler::update_sigma2() {
  r_ = y_ - X_ * beta_;
  const double ssr = r_.squaredNorm();
  const double precision =
      rng_.gamma(cfg_.precision_shape + 0.5 * n_, cfg_.precision_rate + 0.5 * ssr);
  sigma2_ = 1.0 / precision;
}

void UnivariateSsvsSampler::sweep() {
  for (int j = 0; j < p_; ++j) update_coefficient(j);
  update_sigma2();
}

ChainOutput run_twostep_step1(const Dataset& data, const TwoStepConfig& cfg) {
  check_lengths(cfg.iterations, cfg.burn_in, cfg.thin, "twostep");
  const int p = data.p(), q = data.q();
  const int retained = (cfg.iterations - cfg.burn_in + cfg.thin - 1) / cfg.thin;
  ChainOutput out;
  out.method = "twostep";
  out.iterations = cfg.iterations;
  out.burn_in = cfg.burn_in;
  out.seed = cfg.seed;
  out.B.assign(retained, Matrix::Zero(p, q));
  out.Gamma.assign(retained, Matrix::Zero(p, q));
  out.Sigma.assign(retained, Matrix::Zero(q, q));
  const RngStream root = RngStream(cfg.seed).derive(hash_string("twostep"));
  for (int k = 0; k < q; ++k) {
    // independent per-response stream so chains are order-invariant
    UnivariateSsvsSampler chain(data.X, data.Y.col(k), cfg, root.derive(k + 1));
    int stored = 0;
    for (int iter = 0; iter < cfg.iterations; ++iter) {
      chain.sweep();
      if (iter >= cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0) {
        out.B[stored].col(k) = chain.beta();
        out.Gamma[stored].col(k) = chain.gamma();
        out.Sigma[stored](k, k) = chain.sigma2();
        ++stored;
      }
    }
  }
  return out;
}

TwoStepSigma run_twostep_step2(const Dataset& data, const Matrix& B_hat, double iw_df,
                               double iw_scale_multiplier) {
  const int n = data.n(), q = data.q();
  check_positive(iw_scale_multiplier, "twostep step2", "iw_scale_multiplier");
  const double df0 = detail::resolve_iw_df(iw_df, q, "twostep step2");
  const Matrix E = residuals(data, B_hat);
  const Matrix Sn = E.transpose() * E;
  TwoStepSigma out;
  out.posterior_df = df0 + n;
  out.posterior_scale = iw_scale_multiplier * Matrix::Identity(q, q) + Sn;
  const double denom = out.posterior_df - q - 1; // = n + 1 at the default df
  if (!(denom > 0))
    throw std::invalid_argument("twostep step2: posterior mean needs df > q + 1");
  out.sigma_mean = out.posterior_scale / denom;
  return out;
}

} // namespace bmvr
