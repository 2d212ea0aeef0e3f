#pragma once

#include <algorithm>

#include "samplers.hpp"

// Validation helpers shared by the sampler translation units.
namespace bmvr::detail {

double resolve_iw_df(double iw_df, int q, const char* what);
void check_positive(double v, const char* what, const char* name);
void check_probability(double v, const char* what, const char* name);
void check_lengths(int iterations, int burn_in, int thin, const char* what);

inline double clamp_shrink(double v) {
  return std::clamp(v, kShrinkFloor, kShrinkCeil);
}

// Numerically stable logistic function.
inline double sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

} // namespace bmvr::detail
