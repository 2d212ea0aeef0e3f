// Seeded random number stream with hash-derived substreams.
//
// All draw routines are implemented here (no std::<random> distributions) so
// that a given seed produces the same sequence on every build of this code.
// Substreams derived via derive() are statistically independent, which is how
// replicates, chains, and per-response samplers get their own streams.
#pragma once

#include <array>
#include <cstdint>

namespace bmvr {

class RngStream {
public:
  explicit RngStream(std::uint64_t seed);

  // New independent stream keyed by (seed, a, b, c). Deriving with the same
  // key twice gives the same stream; the parent stream is not advanced.
  RngStream derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform_pos();                   // (0, 1)
  double normal();                        // standard normal (Box-Muller)
  double exponential(double rate);
  double gamma(double shape, double rate);         // mean shape/rate
  double inverse_gamma(double shape, double scale); // mean scale/(shape-1)
  double chi_squared(double df);
  bool bernoulli(double prob);

private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_; // xoshiro256++

  void seed_state(std::uint64_t key);
};

// 64-bit mix used for stream derivation; exposed for seed bookkeeping
// (per-replicate and per-method seeds reported in study output).
std::uint64_t mix_u64(std::uint64_t x);
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0);

// FNV-1a, used to key method substreams by name rather than list position.
std::uint64_t hash_string(const char* s);

} // namespace bmvr
