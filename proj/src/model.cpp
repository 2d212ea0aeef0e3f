#include "model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "csvio.hpp"

namespace bmvr {

namespace {

struct ColumnStats {
  Vector mean, sd;
};

std::string column_label(const std::vector<std::string>& names, Eigen::Index j,
                         const char* fallback) {
  if (j < static_cast<Eigen::Index>(names.size())) return "'" + names[j] + "'";
  return std::string(fallback) + " column " + std::to_string(j + 1);
}

ColumnStats column_stats(const Matrix& m, const std::vector<std::string>& names,
                         const char* what) {
  const Eigen::Index n = m.rows();
  ColumnStats s{Vector(m.cols()), Vector(m.cols())};
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    const double ss = (m.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw std::invalid_argument("standardize: zero-variance " +
                                  column_label(names, j, what));
    s.mean(j) = mean;
    s.sd(j) = sd;
  }
  return s;
}

Matrix standardize_columns(const Matrix& m, const Vector& mean, const Vector& sd) {
  return (m.rowwise() - mean.transpose()).array().rowwise() /
         sd.transpose().array();
}

} // namespace

Dataset standardize_train(const Matrix& Y_raw, const Matrix& X_raw,
                          const std::vector<std::string>& x_names,
                          const std::vector<std::string>& y_names) {
  if (Y_raw.rows() != X_raw.rows())
    throw std::invalid_argument("standardize: Y and X row counts differ");
  if (Y_raw.rows() < 2) throw std::invalid_argument("standardize: need n >= 2");
  const ColumnStats xs = column_stats(X_raw, x_names, "predictor");
  const ColumnStats ys = column_stats(Y_raw, y_names, "response");
  Dataset d;
  d.stats = Standardization{xs.mean, xs.sd, ys.mean, ys.sd};
  d.X_raw = X_raw;
  d.Y_raw = Y_raw;
  d.X = standardize_columns(X_raw, xs.mean, xs.sd);
  d.Y = standardize_columns(Y_raw, ys.mean, ys.sd);
  return d;
}

Dataset apply_standardization(const Matrix& Y_raw, const Matrix& X_raw,
                              const Standardization& stats) {
  if (X_raw.cols() != stats.x_mean.size() || Y_raw.cols() != stats.y_mean.size())
    throw std::invalid_argument("apply_standardization: statistics dimension mismatch");
  if (Y_raw.rows() != X_raw.rows())
    throw std::invalid_argument("apply_standardization: Y and X row counts differ");
  Dataset d;
  d.stats = stats;
  d.X_raw = X_raw;
  d.Y_raw = Y_raw;
  d.X = standardize_columns(X_raw, stats.x_mean, stats.x_sd);
  d.Y = standardize_columns(Y_raw, stats.y_mean, stats.y_sd);
  return d;
}

Matrix predict(const Matrix& B, const Matrix& Xstar) {
  if (Xstar.cols() != B.rows())
    throw std::invalid_argument("predict: Xstar has " + std::to_string(Xstar.cols()) +
                                " columns but B has " + std::to_string(B.rows()) +
                                " rows");
  return Xstar * B;
}

Matrix residuals(const Dataset& data, const Matrix& B) {
  if (data.Y.cols() != B.cols())
    throw std::invalid_argument("residuals: B column count does not match q");
  return data.Y - predict(B, data.X);
}

namespace {

std::vector<std::string> block_columns(const std::string& name, Eigen::Index rows,
                                       Eigen::Index cols) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(rows * cols));
  for (Eigen::Index k = 0; k < cols; ++k)
    for (Eigen::Index j = 0; j < rows; ++j)
      out.push_back(name + "_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
  return out;
}

void save_block(const std::string& path, const std::string& name,
                const std::vector<Matrix>& draws) {
  const Eigen::Index rows = draws.front().rows(), cols = draws.front().cols();
  Matrix flat(static_cast<Eigen::Index>(draws.size()), rows * cols);
  for (size_t t = 0; t < draws.size(); ++t)
    flat.row(static_cast<Eigen::Index>(t)) =
        Eigen::Map<const Vector>(draws[t].data(), rows * cols).transpose();
  write_matrix_csv(path, flat, block_columns(name, rows, cols));
}

std::vector<Matrix> load_block(const std::string& path, Eigen::Index rows,
                               Eigen::Index cols) {
  const Matrix flat = read_matrix_csv(path);
  if (flat.cols() != rows * cols)
    throw std::runtime_error("load_chain: block shape mismatch in '" + path + "'");
  std::vector<Matrix> draws(static_cast<size_t>(flat.rows()));
  for (Eigen::Index t = 0; t < flat.rows(); ++t) {
    const Vector row = flat.row(t).transpose();
    draws[static_cast<size_t>(t)] = Eigen::Map<const Matrix>(row.data(), rows, cols);
  }
  return draws;
}

} // namespace

void save_chain(const std::string& dir, const ChainOutput& chain) {
  if (chain.B.empty()) throw std::invalid_argument("save_chain: empty chain");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json meta;
  meta["method"] = chain.method;
  meta["iterations"] = chain.iterations;
  meta["burn_in"] = chain.burn_in;
  meta["seed"] = chain.seed;
  meta["p"] = chain.B.front().rows();
  meta["q"] = chain.B.front().cols();
  meta["retained"] = chain.retained();
  save_block(dir + "/B.csv", "B", chain.B);
  if (!chain.Gamma.empty()) save_block(dir + "/Gamma.csv", "Gamma", chain.Gamma);
  if (!chain.Sigma.empty()) save_block(dir + "/Sigma.csv", "Sigma", chain.Sigma);
  nlohmann::json blocks = nlohmann::json::object();
  for (const auto& [name, draws] : chain.extra) {
    save_block(dir + "/" + name + ".csv", name, draws);
    blocks[name] = {{"rows", draws.front().rows()}, {"cols", draws.front().cols()}};
  }
  meta["extra"] = blocks;
  meta["has_gamma"] = !chain.Gamma.empty();
  meta["has_sigma"] = !chain.Sigma.empty();
  std::ofstream out(dir + "/meta.json");
  if (!out) throw std::runtime_error("save_chain: cannot open '" + dir + "/meta.json'");
  out << meta.dump(2) << '\n';
}

ChainOutput load_chain(const std::string& dir) {
  std::ifstream in(dir + "/meta.json");
  if (!in) throw std::runtime_error("load_chain: cannot open '" + dir + "/meta.json'");
  nlohmann::json meta = nlohmann::json::parse(in);
  ChainOutput chain;
  chain.method = meta.at("method").get<std::string>();
  chain.iterations = meta.at("iterations").get<int>();
  chain.burn_in = meta.at("burn_in").get<int>();
  chain.seed = meta.at("seed").get<std::uint64_t>();
  const auto p = meta.at("p").get<Eigen::Index>();
  const auto q = meta.at("q").get<Eigen::Index>();
  chain.B = load_block(dir + "/B.csv", p, q);
  if (meta.at("has_gamma").get<bool>())
    chain.Gamma = load_block(dir + "/Gamma.csv", p, q);
  if (meta.at("has_sigma").get<bool>())
    chain.Sigma = load_block(dir + "/Sigma.csv", q, q);
  for (const auto& [name, shape] : meta.at("extra").items())
    chain.extra[name] = load_block(dir + "/" + name + ".csv",
                                   shape.at("rows").get<Eigen::Index>(),
                                   shape.at("cols").get<Eigen::Index>());
  return chain;
}

} // namespace bmvr
