#include "rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bmvr {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 finalizer
inline std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += kGolden);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix_u64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix(s);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) {
  std::uint64_t h = seed;
  h = mix_u64(h ^ (kGolden + a));
  h = mix_u64(h ^ rotl(kGolden, 17) ^ b);
  h = mix_u64(h ^ rotl(kGolden, 41) ^ c);
  return h;
}

std::uint64_t hash_string(const char* s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *s; ++s) {
    h ^= static_cast<unsigned char>(*s);
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) { seed_state(seed); }

void RngStream::seed_state(std::uint64_t key) {
  std::uint64_t s = key;
  for (auto& w : state_) w = splitmix(s);
}

RngStream RngStream::derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  return RngStream(derive_key(seed_, a, b, c));
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

double RngStream::normal() {
  // Box-Muller, cosine branch only: two uniforms per draw, no cached state.
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double RngStream::exponential(double rate) {
  if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform_pos()) / rate;
}

double RngStream::gamma(double shape, double rate) {
  if (shape <= 0.0 || rate <= 0.0)
    throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // boost: X = Gamma(shape+1) * U^(1/shape)
    const double g = gamma(shape + 1.0, 1.0);
    const double u = uniform_pos();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double RngStream::inverse_gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw std::invalid_argument("inverse_gamma: shape and scale must be positive");
  return 1.0 / gamma(shape, scale);
}

double RngStream::chi_squared(double df) {
  if (df <= 0.0) throw std::invalid_argument("chi_squared: df must be positive");
  return gamma(0.5 * df, 0.5);
}

bool RngStream::bernoulli(double prob) {
  if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("bernoulli: prob outside [0,1]");
  return uniform() < prob;
}

} // namespace bmvr
