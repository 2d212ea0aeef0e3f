#include <cmath>
#include <vector>

#include <doctest.h>

#include "eval.hpp"
#include "ingest.hpp"
#include "samplers.hpp"
#include "simgen.hpp"
#include "testutil.hpp"

using namespace bmvr;

namespace {

Dataset noise_dataset(int n, int p, int q, std::uint64_t seed) {
  RngStream r(seed);
  Matrix X(n, p), Y(n, q);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, j) = r.normal();
    for (int k = 0; k < q; ++k) Y(i, k) = r.normal();
  }
  Dataset d;
  d.X = d.X_raw = X;
  d.Y = d.Y_raw = Y;
  return d;
}

} // namespace

TEST_SUITE("mbsp") {

TEST_CASE("default global scale is 1/(p sqrt(n log n))") {
  CHECK(mbsp_default_tau(40, 10) ==
        doctest::Approx(1.0 / (10.0 * std::sqrt(40.0 * std::log(40.0))))
            .epsilon(1e-14));
  CHECK(mbsp_default_tau(40, 10) == doctest::Approx(0.008232).epsilon(1e-4));
  CHECK_THROWS(mbsp_default_tau(1, 10)); // log 1 = 0
}

TEST_CASE("coefficient draw matches the matrix-normal conjugate oracle") {
  // With psi, tau, Sigma frozen, B | . ~ MN(H^{-1} X'Y, H^{-1}, Sigma) where
  // H = X'X + diag(1/(tau psi)): mean, per-entry variance, and cross-response
  // covariance all have closed forms.
  const int n = 8, p = 3, q = 2;
  Dataset d = noise_dataset(n, p, q, 51);
  MbspConfig cfg;
  cfg.iterations = 10;
  cfg.burn_in = 0;
  cfg.seed = 52;
  cfg.global_tau = 0.3;
  MbspSampler s(d, cfg);
  Matrix sigma(2, 2);
  sigma << 1.0, 0.45, 0.45, 0.9;
  Vector psi(p);
  psi << 0.5, 2.0, 1.0;
  s.set_state(Matrix::Zero(p, q), sigma, psi, Vector::Ones(p));

  Matrix H = d.X.transpose() * d.X;
  for (int j = 0; j < p; ++j) H(j, j) += 1.0 / (0.3 * psi(j));
  const Matrix H_inv = SpdMatrix(H).inverse();
  const Matrix mean_expected = H_inv * d.X.transpose() * d.Y;

  const int reps = 6000;
  Matrix sum = Matrix::Zero(p, q), sum_sq = Matrix::Zero(p, q);
  std::vector<double> cross(reps); // B(0,0)*B(0,1) for the covariance check
  Matrix first_draws(reps, 2);
  for (int rep = 0; rep < reps; ++rep) {
    s.update_coefficients();
    sum += s.B();
    sum_sq += s.B().cwiseProduct(s.B());
    first_draws(rep, 0) = s.B()(0, 0);
    first_draws(rep, 1) = s.B()(0, 1);
  }
  const Matrix mean = sum / double(reps);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < q; ++k) {
      const double sd = std::sqrt(sigma(k, k) * H_inv(j, j));
      CHECK(std::abs(mean(j, k) - mean_expected(j, k)) <
            3.5 * sd / std::sqrt(double(reps)));
      const double var = sum_sq(j, k) / reps - mean(j, k) * mean(j, k);
      CHECK(std::abs(var - sigma(k, k) * H_inv(j, j)) <
            0.15 * sigma(k, k) * H_inv(j, j));
    }
  // cov(B_{00}, B_{01}) = Sigma_{01} * (H^{-1})_{00}
  const double m0 = first_draws.col(0).mean(), m1 = first_draws.col(1).mean();
  const double cov_emp =
      ((first_draws.col(0).array() - m0) * (first_draws.col(1).array() - m1)).sum() /
      double(reps - 1);
  const double cov_expected = sigma(0, 1) * H_inv(0, 0);
  const double var0 = sigma(0, 0) * H_inv(0, 0), var1 = sigma(1, 1) * H_inv(0, 0);
  CHECK(std::abs(cov_emp - cov_expected) <
        4.0 * std::sqrt(var0 * var1 / double(reps)));
}

TEST_CASE("local scale draw follows its inverse-gamma conditional") {
  // q = 4 keeps the IG shape at 2.5, so mean and a finite variance exist:
  // psi_j ~ IG((q+1)/2, 1/zeta_j + b_j' Omega b_j / (2 tau)).
  const int n = 10, p = 2, q = 4;
  Dataset d = noise_dataset(n, p, q, 53);
  MbspConfig cfg;
  cfg.iterations = 10;
  cfg.burn_in = 0;
  cfg.seed = 54;
  cfg.global_tau = 0.5;
  MbspSampler s(d, cfg);
  Matrix B(p, q);
  B << 1.0, -0.5, 0.2, 0.8, 0.0, 0.3, -0.7, 0.1;
  Vector psi = Vector::Ones(p);
  Vector zeta(p);
  zeta << 2.0, 0.5;

  const double a = (q + 1.0) / 2.0; // 2.5
  Vector scale_expected(p);
  for (int j = 0; j < p; ++j)
    scale_expected(j) = 1.0 / zeta(j) + B.row(j).squaredNorm() / (2.0 * 0.5);

  const int reps = 30000;
  Matrix draws(reps, p);
  for (int rep = 0; rep < reps; ++rep) {
    s.set_state(B, Matrix::Identity(q, q), psi, zeta);
    s.update_local_scales();
    for (int j = 0; j < p; ++j) draws(rep, j) = s.Psi()(j);
  }
  for (int j = 0; j < p; ++j) {
    const double mean_expected = scale_expected(j) / (a - 1.0);
    const double var_expected =
        scale_expected(j) * scale_expected(j) / ((a - 1.0) * (a - 1.0) * (a - 2.0));
    CHECK(std::abs(draws.col(j).mean() - mean_expected) <
          3.5 * std::sqrt(var_expected / double(reps)));
  }
}

TEST_CASE("sigma update includes the coefficient prior term in its scale") {
  // Y = X B exactly: E = 0, so the IW scale is 0.5 I + B' diag(1/(tau psi)) B
  // with df = (q+2) + n + p; repeated draws must average to scale/(df - q - 1).
  const int n = 10, p = 2, q = 2;
  Dataset d = noise_dataset(n, p, q, 55);
  Matrix B(p, q);
  B << 0.8, -0.3, 0.4, 1.1;
  d.Y = d.X * B;
  MbspConfig cfg;
  cfg.iterations = 10;
  cfg.burn_in = 0;
  cfg.seed = 56;
  cfg.global_tau = 0.4;
  MbspSampler s(d, cfg);
  Vector psi(p);
  psi << 1.5, 0.7;

  Matrix prior_term = Matrix::Zero(q, q);
  for (int j = 0; j < p; ++j)
    prior_term += B.row(j).transpose() * B.row(j) / (0.4 * psi(j));
  const Matrix scale = 0.5 * Matrix::Identity(q, q) + prior_term;
  const double df = (q + 2.0) + n + p;
  const Matrix mean_expected = scale / (df - q - 1.0);

  const int reps = 20000;
  Matrix sum = Matrix::Zero(q, q);
  for (int rep = 0; rep < reps; ++rep) {
    s.set_state(B, Matrix::Identity(q, q), psi, Vector::Ones(p));
    s.update_sigma();
    sum += s.Sigma();
  }
  const Matrix mean = sum / double(reps);
  CHECK(testutil::max_abs_diff(mean, mean_expected) <
        0.03 * mean_expected.diagonal().maxCoeff());
}

TEST_CASE("stored blocks: psi is p x 1, tau is the fixed default") {
  Dataset d = noise_dataset(18, 3, 2, 57);
  MbspConfig cfg;
  cfg.iterations = 300;
  cfg.burn_in = 100;
  cfg.seed = 58;
  const ChainOutput chain = run_mbsp(d, cfg);
  REQUIRE(chain.extra.count("psi") == 1);
  REQUIRE(chain.extra.count("tau") == 1);
  const double tau_expected = mbsp_default_tau(18, 3);
  for (const auto& psi : chain.extra.at("psi")) {
    REQUIRE(psi.rows() == 3);
    REQUIRE(psi.cols() == 1);
    CHECK(psi.minCoeff() >= kShrinkFloor);
    CHECK(psi.maxCoeff() <= kShrinkCeil);
  }
  for (const auto& tau : chain.extra.at("tau")) {
    REQUIRE(tau.size() == 1);
    CHECK(tau(0, 0) == tau_expected);
  }
  for (const auto& sig : chain.Sigma) CHECK_NOTHROW(cholesky_lower(sig));
  CHECK(chain.Gamma.empty());
}

TEST_CASE("doubling the iterations preserves the draw prefix") {
  Dataset d = noise_dataset(12, 2, 2, 59);
  MbspConfig cfg;
  cfg.iterations = 100;
  cfg.burn_in = 0;
  cfg.seed = 60;
  const ChainOutput short_chain = run_mbsp(d, cfg);
  cfg.iterations = 200;
  const ChainOutput long_chain = run_mbsp(d, cfg);
  for (int i = 0; i < 100; ++i)
    CHECK(testutil::max_abs_diff(short_chain.B[i], long_chain.B[i]) == 0.0);
}

TEST_CASE("signal recovery on an easy design") {
  SimDesign design;
  design.n = 150;
  design.n_test = 10;
  design.p = 4;
  design.q = 3;
  design.rho_x = 0.3;
  design.rho_eps = 0.5;
  design.seed = 61;
  const SimData sim = generate(design);
  MbspConfig cfg;
  cfg.iterations = 3000;
  cfg.burn_in = 300;
  cfg.seed = 62;
  const ChainOutput chain = run_mbsp(sim.train, cfg);
  const PosteriorEstimates est =
      estimate_from_chain(chain, sim.train, SummaryStatistic::kMean);
  const Matrix B_orig = unstandardize_coefficients(est.B, sim.train.stats);
  CHECK((B_orig.row(0).array() - 1.25).abs().maxCoeff() < 0.25);
  CHECK((B_orig.row(1).array() + 1.0).abs().maxCoeff() < 0.25);
  CHECK(B_orig.row(3).cwiseAbs().maxCoeff() < 0.2);
}

TEST_CASE("config validation") {
  CHECK_THROWS(mbsp_config_from_json({{"mystery", 1}}));
  CHECK_THROWS(mbsp_config_from_json({{"iterations", 4}, {"burn_in", 4}}));
  const MbspConfig ok = mbsp_config_from_json({{"global_tau", 0.2}, {"thin", 2}});
  CHECK(ok.global_tau == 0.2);
  CHECK(ok.thin == 2);
  // an explicit positive tau is honored; non-positive falls back to default
  Dataset d = noise_dataset(9, 2, 2, 63);
  MbspConfig custom;
  custom.global_tau = 0.2;
  CHECK(MbspSampler(d, custom).tau() == 0.2);
  MbspConfig fallback;
  fallback.global_tau = -1.0;
  CHECK(MbspSampler(d, fallback).tau() == mbsp_default_tau(9, 2));
}

} // TEST_SUITE
