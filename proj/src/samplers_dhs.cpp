#include <cmath>
#include <stdexcept>

#include "samplers_detail.hpp"

namespace bmvr {

using detail::check_lengths;
using detail::check_positive;
using detail::clamp_shrink;

DhsSampler::DhsSampler(const Dataset& data, const DhsConfig& cfg)
    : X_(data.X),
      Y_(data.Y),
      n_(static_cast<int>(data.X.rows())),
      p_(static_cast<int>(data.X.cols())),
      q_(static_cast<int>(data.Y.cols())),
      cfg_(cfg),
      prior_df_(detail::resolve_iw_df(cfg.iw_df, q_, "dhs")),
      rng_(RngStream(cfg.seed).derive(hash_string("dhs"))) {
  if (Y_.rows() != X_.rows()) throw std::invalid_argument("dhs: X/Y row mismatch");
  check_positive(cfg_.iw_scale_multiplier, "dhs", "iw_scale_multiplier");
  check_lengths(cfg_.iterations, cfg_.burn_in, cfg_.thin, "dhs");
  if (cfg_.joint_vec_limit < 0)
    throw std::invalid_argument("dhs: joint_vec_limit must be nonnegative");
  G_ = X_.transpose() * X_;
  B_ = Matrix::Zero(p_, q_);
  Sigma_ = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_);
  Omega_ = SpdMatrix(Sigma_).inverse();
  Xi_ = Matrix::Ones(p_, q_);
  Nu_ = Matrix::Ones(p_, q_);
  tau_ = Vector::Ones(q_);
  phi_ = Vector::Ones(q_);
}

void DhsSampler::update_coefficients() {
  if (static_cast<long>(p_) * q_ <= cfg_.joint_vec_limit) {
    // vec(B) | rest ~ N(P^{-1} rhs, P^{-1}), P = Omega (x) G + D^{-1}
    const int m = p_ * q_;
    Matrix P(m, m);
    for (int k2 = 0; k2 < q_; ++k2)
      for (int k1 = 0; k1 < q_; ++k1)
        P.block(k1 * p_, k2 * p_, p_, p_) = Omega_(k1, k2) * G_;
    for (int k = 0; k < q_; ++k)
      for (int j = 0; j < p_; ++j)
        P(k * p_ + j, k * p_ + j) += 1.0 / (Xi_(j, k) * tau_(k));
    const Matrix R0 = X_.transpose() * Y_ * Omega_;
    const Vector rhs = Eigen::Map<const Vector>(R0.data(), m);
    const Matrix L = cholesky_lower(P);
    const Vector w = L.triangularView<Eigen::Lower>().solve(rhs);
    Vector z(m);
    for (int i = 0; i < m; ++i) z(i) = rng_.normal();
    const Vector v =
        L.transpose().triangularView<Eigen::Upper>().solve(w + z);
    B_ = Eigen::Map<const Matrix>(v.data(), p_, q_);
  } else {
    // row blocks: B_j | rest ~ N(P_j^{-1} rhs_j, P_j^{-1}), P_j = G_jj Omega + D_j^{-1}
    Matrix E = Y_ - X_ * B_;
    for (int j = 0; j < p_; ++j) {
      const Vector bj_old = B_.row(j).transpose();
      const Vector t = E.transpose() * X_.col(j) + G_(j, j) * bj_old;
      const Vector rhs = Omega_ * t;
      Matrix Pj = G_(j, j) * Omega_;
      for (int k = 0; k < q_; ++k) Pj(k, k) += 1.0 / (Xi_(j, k) * tau_(k));
      const Matrix L = cholesky_lower(Pj);
      const Vector w = L.triangularView<Eigen::Lower>().solve(rhs);
      Vector z(q_);
      for (int k = 0; k < q_; ++k) z(k) = rng_.normal();
      const Vector bj =
          L.transpose().triangularView<Eigen::Upper>().solve(w + z);
      B_.row(j) = bj.transpose();
      E += X_.col(j) * (bj_old - bj).transpose();
    }
  }
}

void DhsSampler::update_local_scales() {
  for (int k = 0; k < q_; ++k)
    for (int j = 0; j < p_; ++j) {
      Xi_(j, k) = clamp_shrink(rng_.inverse_gamma(
          1.0, 1.0 / Nu_(j, k) + B_(j, k) * B_(j, k) / (2.0 * tau_(k))));
      Nu_(j, k) = clamp_shrink(rng_.inverse_gamma(1.0, 1.0 + 1.0 / Xi_(j, k)));
    }
  for (int k = 0; k < q_; ++k) {
    double s = 0.0;
    for (int j = 0; j < p_; ++j) s += B_(j, k) * B_(j, k) / Xi_(j, k);
    tau_(k) = clamp_shrink(
        rng_.inverse_gamma(0.5 * (p_ + 1), 1.0 / phi_(k) + 0.5 * s));
    phi_(k) = clamp_shrink(rng_.inverse_gamma(1.0, 1.0 + 1.0 / tau_(k)));
  }
}

void DhsSampler::update_sigma() {
  const Matrix E = Y_ - X_ * B_;
  Matrix scale = cfg_.iw_scale_multiplier * Matrix::Identity(q_, q_) +
                 E.transpose() * E;
  scale = 0.5 * (scale + scale.transpose());
  Sigma_ = sample_inverse_wishart(prior_df_ + n_, SpdMatrix(scale), rng_);
  Omega_ = SpdMatrix(Sigma_).inverse();
}

void DhsSampler::sweep() {
  update_coefficients();
  update_local_scales();
  update_sigma();
}

ChainOutput DhsSampler::run() {
  ChainOutput out;
  out.method = "dhs";
  out.iterations = cfg_.iterations;
  out.burn_in = cfg_.burn_in;
  out.seed = cfg_.seed;
  const int retained = (cfg_.iterations - cfg_.burn_in + cfg_.thin - 1) / cfg_.thin;
  out.B.reserve(retained);
  out.Sigma.reserve(retained);
  auto& xi = out.extra["xi"];
  auto& tau = out.extra["tau"];
  xi.reserve(retained);
  tau.reserve(retained);
  for (int iter = 0; iter < cfg_.iterations; ++iter) {
    sweep();
    if (iter >= cfg_.burn_in && (iter - cfg_.burn_in) % cfg_.thin == 0) {
      out.B.push_back(B_);
      out.Sigma.push_back(Sigma_);
      xi.push_back(Xi_);
      tau.push_back(tau_.transpose());
    }
  }
  return out;
}

void DhsSampler::set_state(const Matrix& B, const Matrix& Sigma, const Matrix& Xi,
                           const Matrix& Nu, const Vector& tau, const Vector& phi) {
  if (B.rows() != p_ || B.cols() != q_ || Sigma.rows() != q_ || Sigma.cols() != q_ ||
      Xi.rows() != p_ || Xi.cols() != q_ || Nu.rows() != p_ || Nu.cols() != q_ ||
      tau.size() != q_ || phi.size() != q_)
    throw std::invalid_argument("dhs set_state: dimension mismatch");
  B_ = B;
  Sigma_ = Sigma;
  Omega_ = SpdMatrix(Sigma_).inverse();
  Xi_ = Xi;
  Nu_ = Nu;
  tau_ = tau;
  phi_ = phi;
}

void DhsSampler::set_response(const Matrix& Y) {
  if (Y.rows() != n_ || Y.cols() != q_)
    throw std::invalid_argument("dhs set_response: dimension mismatch");
  Y_ = Y;
}

ChainOutput run_dhs(const Dataset& data, const DhsConfig& cfg) {
  return DhsSampler(data, cfg).run();
}

} // namespace bmvr
