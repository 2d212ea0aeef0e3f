#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "model.hpp"

namespace bmvr {

// Synthetic-study design: x_i ~ N(0, AR1(p, rho_x)), eps_i ~ N(0,
// Equicorr(q, rho_eps)), y_i = B_true' x_i + eps_i, plus a test set of
// n_test rows drawn the same way.
struct SimDesign {
  int n = 40;
  int n_test = 40;
  int p = 10;
  int q = 4;
  double rho_x = 0.7;
  double rho_eps = 0.9;
  Matrix B_true; // empty -> default_true_B(p, q)
  std::uint64_t seed = 1;
};

// Row 1 all 1.25, row 2 all -1, remaining rows 0.
Matrix default_true_B(int p, int q);

SimDesign sim_design_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimDesign& design);

struct SimData {
  Dataset train; // standardized empirically; train statistics applied to test
  Dataset test;
  Matrix B_true;     // original scale
  Matrix Sigma_true; // original-scale error covariance Equicorr(q, rho_eps)
};

SimData generate(const SimDesign& design);

// One CSV per raw matrix plus a JSON design sidecar; load re-standardizes
// from the raw matrices, reproducing `generate`'s output exactly.
void save_simdata(const std::string& dir, const SimData& data, const SimDesign& design);
SimData load_dataset_dir(const std::string& dir);

} // namespace bmvr
