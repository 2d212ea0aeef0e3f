#include <cmath>
#include <numeric>
#include <stdexcept>

#include "samplers_detail.hpp"

namespace bmvr {

using detail::check_lengths;
using detail::check_positive;
using detail::check_probability;

DssSampler::DssSampler(const Dataset& data, const DssConfig& cfg)
    : X_(data.X),
      Y_(data.Y),
      n_(static_cast<int>(data.X.rows())),
      p_(static_cast<int>(data.X.cols())),
      q_(static_cast<int>(data.Y.cols())),
      cfg_(cfg),
      prior_df_(detail::resolve_iw_df(cfg.iw_df, q_, "dss")),
      rng_(RngStream(cfg.seed).derive(hash_string("dss"))) {
  if (Y_.rows() != X_.rows()) throw std::invalid_argument("dss: X/Y row mismatch");
  check_positive(cfg_.iw_scale_multiplier, "dss", "iw_scale_multiplier");
  check_positive(cfg_.slab_variance, "dss", "slab_variance");
  check_probability(cfg_.inclusion_probability, "dss", "inclusion_probability");
  check_lengths(cfg_.iterations, cfg_.burn_in, cfg_.thin, "dss");
  xtx_diag_ = X_.colwise().squaredNorm();
  B_ = Matrix::Zero(p_, q_);
  Gamma_ = Matrix::Zero(p_, q_);
  Sigma_ = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_);
  Omega_ = SpdMatrix(Sigma_).inverse();
  E_ = Y_;
}

void DssSampler::refresh_residuals() { E_ = Y_ - X_ * B_; }

void DssSampler::update_coefficient(int j, int k) {
  const double g = xtx_diag_(j);
  const double a = Omega_(k, k) * g;
  const double b_old = B_(j, k);
  // linear term of the log conditional in B_jk, with the rest of B fixed
  const double c = X_.col(j).dot(E_ * Omega_.col(k)) + b_old * a;
  const double v = cfg_.slab_variance;
  const double v_star = 1.0 / (a + 1.0 / v);
  const double m_star = v_star * c;
  // marginal likelihood ratio slab/spike with B_jk integrated out
  const double log_bf = 0.5 * std::log(v_star / v) + 0.5 * c * m_star;
  const double pi = cfg_.inclusion_probability;
  const double logit = std::log(pi / (1.0 - pi)) + log_bf;
  if (!std::isfinite(logit))
    throw std::runtime_error("dss: non-finite inclusion log-odds (numerical bug)");
  const bool include = rng_.bernoulli(detail::sigmoid(logit));
  const double b_new = include ? m_star + std::sqrt(v_star) * rng_.normal() : 0.0;
  Gamma_(j, k) = include ? 1.0 : 0.0;
  B_(j, k) = b_new;
  if (b_new != b_old) E_.col(k) += (b_old - b_new) * X_.col(j);
}

void DssSampler::update_sigma() {
  refresh_residuals();
  Matrix scale = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_) +
                 E_.transpose() * E_;
  scale = 0.5 * (scale + scale.transpose());
  Sigma_ = sample_inverse_wishart(prior_df_ + n_, SpdMatrix(scale), rng_);
  Omega_ = SpdMatrix(Sigma_).inverse();
}

void DssSampler::sweep() {
  if (!cfg_.random_scan) {
    for (int j = 0; j < p_; ++j)
      for (int k = 0; k < q_; ++k) update_coefficient(j, k);
  } else {
    std::vector<int> sites(static_cast<size_t>(p_) * q_);
    std::iota(sites.begin(), sites.end(), 0);
    for (size_t i = sites.size(); i > 1; --i)
      std::swap(sites[i - 1], sites[static_cast<size_t>(rng_.uniform() * i)]);
    for (int s : sites) update_coefficient(s / q_, s % q_);
  }
  update_sigma();
}

ChainOutput DssSampler::run() {
  ChainOutput out;
  out.method = "dss";
  out.iterations = cfg_.iterations;
  out.burn_in = cfg_.burn_in;
  out.seed = cfg_.seed;
  const int retained = (cfg_.iterations - cfg_.burn_in + cfg_.thin - 1) / cfg_.thin;
  out.B.reserve(retained);
  out.Gamma.reserve(retained);
  out.Sigma.reserve(retained);
  for (int iter = 0; iter < cfg_.iterations; ++iter) {
    sweep();
    if (iter >= cfg_.burn_in && (iter - cfg_.burn_in) % cfg_.thin == 0) {
      out.B.push_back(B_);
      out.Gamma.push_back(Gamma_);
      out.Sigma.push_back(Sigma_);
    }
  }
  return out;
}

void DssSampler::set_state(const Matrix& B, const Matrix& Gamma, const Matrix& Sigma) {
  if (B.rows() != p_ || B.cols() != q_ || Gamma.rows() != p_ || Gamma.cols() != q_ ||
      Sigma.rows() != q_ || Sigma.cols() != q_)
    throw std::invalid_argument("dss set_state: dimension mismatch");
  B_ = B;
  Gamma_ = Gamma;
  Sigma_ = Sigma;
  Omega_ = SpdMatrix(Sigma_).inverse();
  refresh_residuals();
}

void DssSampler::set_response(const Matrix& Y) {
  if (Y.rows() != n_ || Y.cols() != q_)
    throw std::invalid_argument("dss set_response: dimension mismatch");
  Y_ = Y;
  refresh_residuals();
}

ChainOutput run_dss(const Dataset& data, const DssConfig& cfg) {
  return DssSampler(data, cfg).run();
}

} // namespace bmvr
