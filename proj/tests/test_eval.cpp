#include <cmath>
#include <vector>

#include <doctest.h>

#include "eval.hpp"
#include "testutil.hpp"

using namespace bmvr;

TEST_SUITE("eval") {

TEST_CASE("frobenius loss: trivial cases and the paper-design norm") {
  Matrix a(1, 1), b(1, 1);
  a << 3.0;
  b << 5.0;
  CHECK(loss_frobenius(a, b) == 2.0);
  CHECK(loss_frobenius(b, b) == 0.0);
  CHECK(loss_frobenius(Matrix::Zero(10, 4), default_true_B(10, 4)) ==
        doctest::Approx(std::sqrt(10.25)).epsilon(1e-14));
  CHECK_THROWS(loss_frobenius(Matrix::Zero(2, 2), Matrix::Zero(3, 2)));
}

TEST_CASE("frobenius loss is symmetric and satisfies the triangle inequality") {
  RngStream r(71);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix x(3, 2), y(3, 2), z(3, 2);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k) {
        x(j, k) = r.normal();
        y(j, k) = r.normal();
        z(j, k) = r.normal();
      }
    CHECK(loss_frobenius(x, y) == loss_frobenius(y, x));
    CHECK(loss_frobenius(x, z) <= loss_frobenius(x, y) + loss_frobenius(y, z) + 1e-12);
  }
}

TEST_CASE("rmse per response: trivial cases") {
  Matrix ystar(5, 1), yhat(5, 1);
  ystar << 3, 4, 0, 0, 0;
  yhat.setZero();
  const Vector rmse = rmse_per_response(ystar, yhat);
  REQUIRE(rmse.size() == 1);
  CHECK(rmse(0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(rmse_per_response(ystar, ystar)(0) == 0.0);
  CHECK_THROWS(rmse_per_response(Matrix::Zero(5, 1), Matrix::Zero(4, 1)));
}

TEST_CASE("prediction loss squared equals n* times the summed squared RMSEs") {
  RngStream r(72);
  Matrix ystar(7, 3), yhat(7, 3);
  for (int i = 0; i < 7; ++i)
    for (int k = 0; k < 3; ++k) {
      ystar(i, k) = r.normal();
      yhat(i, k) = r.normal();
    }
  const Vector rmse = rmse_per_response(ystar, yhat);
  const double loss_pred = loss_frobenius(yhat, ystar);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) sum += 7.0 * rmse(k) * rmse(k);
  CHECK(std::abs(loss_pred * loss_pred - sum) < 1e-10);
}

TEST_CASE("batch-means MCSE: constant, iid, and autocorrelated series") {
  std::vector<double> constant(1000, 2.5);
  CHECK(mcse_batch_means(constant, 50) == 0.0);

  RngStream r(73);
  const int n = 10000;
  std::vector<double> iid(n);
  for (auto& v : iid) v = r.normal();
  const double m = mcse_batch_means(iid, 100);
  CHECK(std::abs(m - 0.01) < 0.003); // within 30% of sd/sqrt(n)

  // AR(1), phi = 0.9: asymptotic sd of the mean is larger by sqrt((1+phi)/(1-phi))
  std::vector<double> ar(n);
  double prev = 0.0;
  for (auto& v : ar) {
    prev = 0.9 * prev + r.normal();
    v = prev;
  }
  const double m_ar = mcse_batch_means(ar, 100);
  CHECK(m_ar > 2.0 * m);

  CHECK_THROWS(mcse_batch_means(std::vector<double>(10, 1.0), 100));
  CHECK_THROWS(mcse_batch_means(iid, 1));
}

TEST_CASE("evaluate_method produces one finite scored row") {
  SimDesign design; // paper defaults, n = 40
  design.seed = 74;
  const SimData sim = generate(design);
  const ReplicateResult row = evaluate_method(
      "twostep", sim, nlohmann::json::object(), 75, 400, 50, SummaryStatistic::kMean);
  CHECK(row.ok());
  CHECK(row.loss_B > 0.0);
  CHECK(row.loss_Sigma > 0.0);
  CHECK(row.loss_pred > 0.0);
  REQUIRE(row.rmse.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(row.rmse(k) > 0.0);
  CHECK(row.seconds >= 0.0);
  CHECK(std::isfinite(row.loss_B));
}

TEST_CASE("study rows are invariant to method ordering") {
  StudyConfig cfg;
  cfg.design.seed = 0; // unused: data seeds derive from the master seed
  cfg.methods = {"twostep", "dss"};
  cfg.replicates = 2;
  cfg.n_values = {40};
  cfg.master_seed = 76;
  cfg.iterations = 300;
  cfg.burn_in = 50;
  cfg.threads = 1;
  const auto a = run_replicate_study(cfg);
  cfg.methods = {"dss", "twostep"};
  const auto b = run_replicate_study(cfg);
  REQUIRE(a.size() == 4);
  REQUIRE(b.size() == 4);
  for (const auto& row : a) {
    bool matched = false;
    for (const auto& other : b) {
      if (other.n == row.n && other.replicate == row.replicate &&
          other.method == row.method) {
        matched = true;
        CHECK(other.loss_B == row.loss_B);
        CHECK(other.loss_Sigma == row.loss_Sigma);
        CHECK(other.loss_pred == row.loss_pred);
        CHECK((other.rmse - row.rmse).cwiseAbs().maxCoeff() == 0.0);
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("study rows arrive in (n, replicate, method) order, threaded or not") {
  StudyConfig cfg;
  cfg.methods = {"twostep", "mbsp"};
  cfg.replicates = 2;
  cfg.n_values = {40, 80};
  cfg.master_seed = 77;
  cfg.iterations = 200;
  cfg.burn_in = 20;
  cfg.threads = 4;
  const auto rows = run_replicate_study(cfg);
  REQUIRE(rows.size() == 8);
  int idx = 0;
  for (int n : {40, 80})
    for (int rep = 1; rep <= 2; ++rep)
      for (const char* m : {"twostep", "mbsp"}) {
        CHECK(rows[size_t(idx)].n == n);
        CHECK(rows[size_t(idx)].replicate == rep);
        CHECK(rows[size_t(idx)].method == m);
        ++idx;
      }
}

TEST_CASE("a failing method yields an error row, not an aborted study") {
  StudyConfig cfg;
  cfg.methods = {"twostep", "dss"};
  cfg.replicates = 1;
  cfg.n_values = {40};
  cfg.master_seed = 78;
  cfg.iterations = 200;
  cfg.burn_in = 20;
  cfg.threads = 1;
  cfg.method_configs = {{"dss", {{"slab_variance", -4.0}}}}; // invalid on purpose
  const auto rows = run_replicate_study(cfg);
  REQUIRE(rows.size() == 2);
  int errors = 0;
  for (const auto& row : rows) {
    if (row.method == "dss") {
      CHECK_FALSE(row.ok());
      CHECK(row.status.find("error") == 0);
      ++errors;
    } else {
      CHECK(row.ok());
    }
  }
  CHECK(errors == 1);

  const nlohmann::json summary = study_summary(rows);
  REQUIRE(summary.at("groups").size() == 2);
  for (const auto& g : summary.at("groups")) {
    if (g.at("method") == "dss") {
      CHECK(g.at("errors") == 1);
      CHECK_FALSE(g.contains("loss_B")); // nothing to aggregate
    } else {
      CHECK(g.at("errors") == 0);
      CHECK(g.contains("loss_B"));
    }
  }
}

TEST_CASE("results CSV round trip, including error rows and the seconds column") {
  testutil::TempDir tmp;
  std::vector<ReplicateResult> rows(2);
  rows[0].n = 40;
  rows[0].replicate = 1;
  rows[0].method = "dss";
  rows[0].loss_B = 1.0 / 3.0;
  rows[0].loss_Sigma = 2.5e-17;
  rows[0].loss_pred = 7.25;
  rows[0].rmse = (Vector(2) << 0.1, 0.2).finished();
  rows[0].seconds = 1.5;
  rows[1].n = 40;
  rows[1].replicate = 1;
  rows[1].method = "dhs";
  rows[1].rmse = Vector::Zero(2);
  rows[1].status = "error: exploded, twice";

  write_study_results_csv(tmp.file("results.csv"), rows, 2);
  const std::string text = testutil::read_file(tmp.file("results.csv"));
  CHECK(text.find("n,replicate,method,loss_B,loss_Sigma,loss_pred,rmse_1,rmse_2,"
                  "seconds,status") == 0);
  CHECK(text.find("exploded; twice") != std::string::npos); // comma sanitized

  const auto back = read_study_results_csv(tmp.file("results.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].loss_B == rows[0].loss_B); // bitwise through %.17g
  CHECK(back[0].loss_Sigma == rows[0].loss_Sigma);
  CHECK(back[0].rmse(1) == 0.2);
  CHECK(back[0].ok());
  CHECK_FALSE(back[1].ok());
  CHECK(std::isnan(back[1].loss_B));

  write_study_timings_csv(tmp.file("timings.csv"), rows);
  const std::string timing_text = testutil::read_file(tmp.file("timings.csv"));
  CHECK(timing_text.find("n,replicate,method,seconds") == 0);
  CHECK(timing_text.find("1.5") != std::string::npos);
}

TEST_CASE("box-plot statistics use type-7 quantiles and 1.5 IQR whiskers") {
  std::vector<ReplicateResult> rows;
  for (int i = 1; i <= 5; ++i) {
    ReplicateResult r;
    r.n = 40;
    r.replicate = i;
    r.method = "dss";
    r.loss_B = double(i); // 1..5
    r.loss_Sigma = 1.0;
    r.loss_pred = i == 5 ? 100.0 : double(i); // outlier beyond the whisker
    r.rmse = Vector::Constant(1, double(i));
    rows.push_back(r);
  }
  const nlohmann::json s = study_summary(rows);
  const auto& g = s.at("groups").at(0);
  CHECK(g.at("loss_B").at("median") == 3.0);
  CHECK(g.at("loss_B").at("q1") == 2.0);
  CHECK(g.at("loss_B").at("q3") == 4.0);
  CHECK(g.at("loss_B").at("whisker_low") == 1.0);
  CHECK(g.at("loss_B").at("whisker_high") == 5.0);
  CHECK(g.at("loss_B").at("count") == 5);
  // loss_pred: q3 = 4 + (100-4)*0.0 ... type-7 on {1,2,3,4,100}: q3 = 4,
  // iqr = 2, fence = 7, so the whisker stops at 4 and 100 lies outside
  CHECK(g.at("loss_pred").at("whisker_high") == 4.0);
  CHECK(g.at("rmse_median").at(0) == 3.0);
}

TEST_CASE("study config json: defaults, round trip, and validation") {
  const StudyConfig def = study_config_from_json(nlohmann::json::object());
  CHECK(def.methods == std::vector<std::string>{"twostep", "dss", "dhs", "mbsp"});
  CHECK(def.replicates == 25);
  CHECK(def.n_values == std::vector<int>{40, 80, 200});
  CHECK(def.iterations == 10000);
  CHECK(def.burn_in == 100);

  const nlohmann::json j = {{"methods", {"dss"}},
                            {"replicates", 3},
                            {"n_values", {50}},
                            {"master_seed", 9},
                            {"iterations", 500},
                            {"burn_in", 50},
                            {"summary", "median"},
                            {"design", {{"p", 6}, {"q", 2}, {"rho_x", 0.5}}}};
  const StudyConfig cfg = study_config_from_json(j);
  CHECK(cfg.methods == std::vector<std::string>{"dss"});
  CHECK(cfg.design.p == 6);
  CHECK(cfg.design.rho_x == 0.5);
  CHECK(cfg.summary == "median");
  const StudyConfig round = study_config_from_json(to_json(cfg));
  CHECK(round.design.p == 6);
  CHECK(round.replicates == 3);

  CHECK_THROWS(study_config_from_json({{"methods", {"ridge"}}}));
  CHECK_THROWS(study_config_from_json({{"methods", nlohmann::json::array()}}));
  CHECK_THROWS(study_config_from_json({{"replicates", 0}}));
  CHECK_THROWS(study_config_from_json({{"n_values", {1}}}));
  CHECK_THROWS(study_config_from_json({{"summary", "mode"}}));
  CHECK_THROWS(study_config_from_json({{"design", {{"n", 40}}}})); // n comes from n_values
  CHECK_THROWS(study_config_from_json({{"unknown", 1}}));
}

} // TEST_SUITE
