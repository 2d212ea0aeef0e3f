#include "simgen.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "csvio.hpp"
#include "distributions.hpp"

namespace bmvr {

Matrix default_true_B(int p, int q) {
  if (p < 2) throw std::invalid_argument("default_true_B: need p >= 2");
  if (q < 1) throw std::invalid_argument("default_true_B: need q >= 1");
  Matrix b = Matrix::Zero(p, q);
  b.row(0).setConstant(1.25);
  b.row(1).setConstant(-1.0);
  return b;
}

namespace {

void validate(const SimDesign& d) {
  if (d.n < 2) throw std::invalid_argument("simgen: need n >= 2");
  if (d.n_test < 1) throw std::invalid_argument("simgen: need n_test >= 1");
  if (d.p < 1 || d.q < 1) throw std::invalid_argument("simgen: need p, q >= 1");
  if (!(std::abs(d.rho_x) < 1.0))
    throw std::invalid_argument("simgen: rho_x must be in (-1, 1)");
  if (!(std::abs(d.rho_eps) < 1.0))
    throw std::invalid_argument("simgen: rho_eps must be in (-1, 1)");
  if (d.B_true.size() && (d.B_true.rows() != d.p || d.B_true.cols() != d.q))
    throw std::invalid_argument("simgen: B_true shape does not match (p, q)");
}

} // namespace

SimDesign sim_design_from_json(const nlohmann::json& j) {
  if (!j.is_object() && !j.is_null())
    throw std::invalid_argument("simgen: design must be a JSON object");
  SimDesign d;
  if (j.is_null()) return d;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "n") d.n = item.value().get<int>();
    else if (key == "n_test") d.n_test = item.value().get<int>();
    else if (key == "p") d.p = item.value().get<int>();
    else if (key == "q") d.q = item.value().get<int>();
    else if (key == "rho_x") d.rho_x = item.value().get<double>();
    else if (key == "rho_eps") d.rho_eps = item.value().get<double>();
    else if (key == "seed") d.seed = item.value().get<std::uint64_t>();
    else if (key == "B_true") {
      const auto& rows = item.value();
      if (!rows.is_array() || rows.empty() || !rows.at(0).is_array() ||
          rows.at(0).empty())
        throw std::invalid_argument(
            "simgen: B_true must be a non-empty array of equal-length rows");
      const auto nrow = static_cast<Eigen::Index>(rows.size());
      const auto ncol = static_cast<Eigen::Index>(rows.at(0).size());
      d.B_true.resize(nrow, ncol);
      for (Eigen::Index i = 0; i < nrow; ++i) {
        const auto& row = rows.at(static_cast<size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncol)
          throw std::invalid_argument(
              "simgen: B_true must be a non-empty array of equal-length rows");
        for (Eigen::Index k = 0; k < ncol; ++k)
          d.B_true(i, k) = row.at(static_cast<size_t>(k)).get<double>();
      }
    }
    else throw std::invalid_argument("simgen: unknown design key '" + key + "'");
  }
  validate(d);
  return d;
}

nlohmann::json to_json(const SimDesign& design) {
  nlohmann::json j = {{"n", design.n},         {"n_test", design.n_test},
                      {"p", design.p},         {"q", design.q},
                      {"rho_x", design.rho_x}, {"rho_eps", design.rho_eps},
                      {"seed", design.seed}};
  if (design.B_true.size()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < design.B_true.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < design.B_true.cols(); ++k)
        row.push_back(design.B_true(i, k));
      rows.push_back(std::move(row));
    }
    j["B_true"] = std::move(rows);
  }
  return j;
}

namespace {

Matrix draw_rows(int n, const Matrix& chol_lower, RngStream& rng) {
  const int d = static_cast<int>(chol_lower.rows());
  Matrix out(n, d);
  const Vector zero = Vector::Zero(d);
  for (int i = 0; i < n; ++i)
    out.row(i) = sample_mvnormal(zero, chol_lower, rng).transpose();
  return out;
}

} // namespace

SimData generate(const SimDesign& design) {
  validate(design);
  const Matrix B_true =
      design.B_true.size() ? design.B_true : default_true_B(design.p, design.q);
  const Matrix chol_x = cholesky_lower(ar1_covariance(design.p, design.rho_x));
  const Matrix sigma_true = equicorrelation(design.q, design.rho_eps);
  const Matrix chol_eps = cholesky_lower(sigma_true);

  const RngStream root(design.seed);
  RngStream train_rng = root.derive(1); // disjoint substreams for train/test
  RngStream test_rng = root.derive(2);

  const Matrix X_train = draw_rows(design.n, chol_x, train_rng);
  const Matrix Y_train = X_train * B_true + draw_rows(design.n, chol_eps, train_rng);
  const Matrix X_test = draw_rows(design.n_test, chol_x, test_rng);
  const Matrix Y_test = X_test * B_true + draw_rows(design.n_test, chol_eps, test_rng);

  SimData out;
  out.train = standardize_train(Y_train, X_train);
  out.test = apply_standardization(Y_test, X_test, out.train.stats);
  out.B_true = B_true;
  out.Sigma_true = sigma_true;
  return out;
}

namespace {

std::vector<std::string> numbered(const char* prefix, Eigen::Index k) {
  std::vector<std::string> names;
  for (Eigen::Index i = 1; i <= k; ++i)
    names.push_back(std::string(prefix) + std::to_string(i));
  return names;
}

} // namespace

void save_simdata(const std::string& dir, const SimData& data, const SimDesign& design) {
  std::filesystem::create_directories(dir);
  const auto xnames = numbered("x", data.train.X_raw.cols());
  const auto ynames = numbered("y", data.train.Y_raw.cols());
  write_matrix_csv(dir + "/X_train.csv", data.train.X_raw, xnames);
  write_matrix_csv(dir + "/Y_train.csv", data.train.Y_raw, ynames);
  write_matrix_csv(dir + "/X_test.csv", data.test.X_raw, xnames);
  write_matrix_csv(dir + "/Y_test.csv", data.test.Y_raw, ynames);
  if (data.B_true.size())
    write_matrix_csv(dir + "/B_true.csv", data.B_true, numbered("b", data.B_true.cols()));
  if (data.Sigma_true.size())
    write_matrix_csv(dir + "/Sigma_true.csv", data.Sigma_true,
                     numbered("s", data.Sigma_true.cols()));
  nlohmann::json j;
  j["n"] = design.n;
  j["n_test"] = design.n_test;
  j["p"] = design.p;
  j["q"] = design.q;
  j["rho_x"] = design.rho_x;
  j["rho_eps"] = design.rho_eps;
  j["seed"] = design.seed;
  std::ofstream out(dir + "/design.json");
  if (!out) throw std::runtime_error("save_simdata: cannot open '" + dir + "/design.json'");
  out << j.dump(2) << '\n';
}

SimData load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  for (const char* f : {"X_train.csv", "Y_train.csv", "X_test.csv", "Y_test.csv"})
    if (!fs::exists(dir + "/" + f))
      throw std::runtime_error("load_dataset_dir: missing '" + dir + "/" + f + "'");
  const Matrix X_train = read_matrix_csv(dir + "/X_train.csv");
  const Matrix Y_train = read_matrix_csv(dir + "/Y_train.csv");
  const Matrix X_test = read_matrix_csv(dir + "/X_test.csv");
  const Matrix Y_test = read_matrix_csv(dir + "/Y_test.csv");
  SimData out;
  out.train = standardize_train(Y_train, X_train);
  out.test = apply_standardization(Y_test, X_test, out.train.stats);
  if (fs::exists(dir + "/B_true.csv"))
    out.B_true = read_matrix_csv(dir + "/B_true.csv");
  if (fs::exists(dir + "/Sigma_true.csv"))
    out.Sigma_true = read_matrix_csv(dir + "/Sigma_true.csv");
  return out;
}

} // namespace bmvr
