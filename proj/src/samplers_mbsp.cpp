#include <cmath>
#include <stdexcept>

#include "samplers_detail.hpp"

namespace bmvr {

using detail::check_lengths;
using detail::check_positive;
using detail::clamp_shrink;

MbspSampler::MbspSampler(const Dataset& data, const MbspConfig& cfg)
    : X_(data.X),
      Y_(data.Y),
      n_(static_cast<int>(data.X.rows())),
      p_(static_cast<int>(data.X.cols())),
      q_(static_cast<int>(data.Y.cols())),
      cfg_(cfg),
      prior_df_(detail::resolve_iw_df(cfg.iw_df, q_, "mbsp")),
      tau_(cfg.global_tau > 0 ? cfg.global_tau : mbsp_default_tau(n_, p_)),
      rng_(RngStream(cfg.seed).derive(hash_string("mbsp"))) {
  if (Y_.rows() != X_.rows()) throw std::invalid_argument("mbsp: X/Y row mismatch");
  check_positive(cfg_.iw_scale_multiplier, "mbsp", "iw_scale_multiplier");
  check_positive(tau_, "mbsp", "global_tau");
  check_lengths(cfg_.iterations, cfg_.burn_in, cfg_.thin, "mbsp");
  G_ = X_.transpose() * X_;
  B_ = Matrix::Zero(p_, q_);
  Sigma_ = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_);
  Omega_ = SpdMatrix(Sigma_).inverse();
  psi_ = Vector::Ones(p_);
  zeta_ = Vector::Ones(p_);
}

void MbspSampler::update_coefficients() {
  // B | rest ~ MN(M, H^{-1}, Sigma) with H = G + (tau D)^{-1}, M = H^{-1} X'Y
  Matrix H = G_;
  H.diagonal() += (tau_ * psi_.array()).inverse().matrix();
  const Matrix LH = cholesky_lower(H);
  const Matrix W = X_.transpose() * Y_;
  const Matrix M = LH.transpose().triangularView<Eigen::Upper>().solve(
      LH.triangularView<Eigen::Lower>().solve(W));
  const Matrix Z = sample_standard_normal_matrix(p_, q_, rng_);
  const Matrix LS = cholesky_lower(Sigma_);
  B_ = M + LH.transpose().triangularView<Eigen::Upper>().solve(Z * LS.transpose());
}

void MbspSampler::update_local_scales() {
  for (int j = 0; j < p_; ++j) {
    const double quad = B_.row(j) * Omega_ * B_.row(j).transpose();
    psi_(j) = clamp_shrink(rng_.inverse_gamma(
        0.5 * (q_ + 1), 1.0 / zeta_(j) + quad / (2.0 * tau_)));
    zeta_(j) = clamp_shrink(rng_.inverse_gamma(1.0, 1.0 + 1.0 / psi_(j)));
  }
}

void MbspSampler::update_sigma() {
  const Matrix E = Y_ - X_ * B_;
  const Matrix prior_term =
      B_.transpose() * (1.0 / (tau_ * psi_.array())).matrix().asDiagonal() * B_;
  Matrix scale = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_) +
                 E.transpose() * E + prior_term;
  scale = 0.5 * (scale + scale.transpose());
  Sigma_ = sample_inverse_wishart(prior_df_ + n_ + p_, SpdMatrix(scale), rng_);
  Omega_ = SpdMatrix(Sigma_).inverse();
}

void MbspSampler::sweep() {
  update_coefficients();
  update_local_scales();
  update_sigma();
}

ChainOutput MbspSampler::run() {
  ChainOutput out;
  out.method = "mbsp";
  out.iterations = cfg_.iterations;
  out.burn_in = cfg_.burn_in;
  out.seed = cfg_.seed;
  const int retained = (cfg_.iterations - cfg_.burn_in + cfg_.thin - 1) / cfg_.thin;
  out.B.reserve(retained);
  out.Sigma.reserve(retained);
  auto& psi = out.extra["psi"];
  auto& tau = out.extra["tau"];
  psi.reserve(retained);
  tau.reserve(retained);
  for (int iter = 0; iter < cfg_.iterations; ++iter) {
    sweep();
    if (iter >= cfg_.burn_in && (iter - cfg_.burn_in) % cfg_.thin == 0) {
      out.B.push_back(B_);
      out.Sigma.push_back(Sigma_);
      psi.push_back(psi_);
      tau.push_back(Matrix::Constant(1, 1, tau_));
    }
  }
  return out;
}

void MbspSampler::set_state(const Matrix& B, const Matrix& Sigma, const Vector& psi,
                            const Vector& zeta) {
  if (B.rows() != p_ || B.cols() != q_ || Sigma.rows() != q_ || Sigma.cols() != q_ ||
      psi.size() != p_ || zeta.size() != p_)
    throw std::invalid_argument("mbsp set_state: dimension mismatch");
  B_ = B;
  Sigma_ = Sigma;
  Omega_ = SpdMatrix(Sigma_).inverse();
  psi_ = psi;
  zeta_ = zeta;
}

void MbspSampler::set_response(const Matrix& Y) {
  if (Y.rows() != n_ || Y.cols() != q_)
    throw std::invalid_argument("mbsp set_response: dimension mismatch");
  Y_ = Y;
}

ChainOutput run_mbsp(const Dataset& data, const MbspConfig& cfg) {
  return MbspSampler(data, cfg).run();
}

} // namespace bmvr
