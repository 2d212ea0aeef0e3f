#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "rng.hpp"
#include "testutil.hpp"

using bmvr::RngStream;
using bmvr::hash_string;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces, different seed differs") {
  RngStream a(42), b(42), c(43);
  bool all_equal = true, any_differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && (x == y);
    any_differs = any_differs || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("derive is a pure function of parent seed and keys") {
  RngStream parent(7);
  RngStream d1 = parent.derive(3, 1, 2);
  for (int i = 0; i < 10; ++i) (void)parent.next_u64(); // advance the parent
  RngStream d2 = parent.derive(3, 1, 2);
  CHECK(d1.next_u64() == d2.next_u64());

  // distinct keys give distinct streams
  RngStream e1 = parent.derive(3, 1, 2), e2 = parent.derive(4, 1, 2);
  CHECK(e1.next_u64() != e2.next_u64());
  CHECK(parent.derive(3).seed() != parent.derive(4).seed());
  CHECK(hash_string("dss") != hash_string("dhs"));
  CHECK(hash_string("twostep") != hash_string("mbsp"));
}

TEST_CASE("uniform lies in [0,1) with mean 1/2") {
  RngStream r(11);
  const int n = 100000;
  double sum = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  // sd of the mean is (1/sqrt 12)/sqrt n ~ 0.0009
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal moments") {
  RngStream r(12);
  const int n = 100000;
  std::vector<double> z(n);
  for (auto& v : z) v = r.normal();
  CHECK(std::abs(testutil::mean_of(z)) < 0.02);       // sd of mean ~ 0.0032
  CHECK(std::abs(testutil::variance_of(z) - 1.0) < 0.03);
}

TEST_CASE("exponential mean 1/rate") {
  RngStream r(13);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += r.exponential(2.0);
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gamma shape/rate moments, including shape below one") {
  RngStream r(14);
  const int n = 100000;
  std::vector<double> g(n), h(n);
  for (auto& v : g) v = r.gamma(3.0, 2.0); // mean 1.5, var 0.75
  for (auto& v : h) v = r.gamma(0.5, 1.0); // mean 0.5, var 0.5
  CHECK(std::abs(testutil::mean_of(g) - 1.5) < 0.02);
  CHECK(std::abs(testutil::variance_of(g) - 0.75) < 0.03);
  CHECK(std::abs(testutil::mean_of(h) - 0.5) < 0.02);
  CHECK(std::abs(testutil::variance_of(h) - 0.5) < 0.04);
  double min_g = *std::min_element(g.begin(), g.end());
  double min_h = *std::min_element(h.begin(), h.end());
  CHECK(min_g > 0.0);
  CHECK(min_h > 0.0);
}

TEST_CASE("inverse gamma mean scale/(shape-1)") {
  RngStream r(15);
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = r.inverse_gamma(3.0, 2.0); // mean 1, var 1
  CHECK(std::abs(testutil::mean_of(x) - 1.0) < 0.04);
}

TEST_CASE("chi squared mean df, variance 2 df") {
  RngStream r(16);
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = r.chi_squared(5.0);
  CHECK(std::abs(testutil::mean_of(x) - 5.0) < 0.05);
  CHECK(std::abs(testutil::variance_of(x) - 10.0) < 0.5);
}

TEST_CASE("bernoulli frequency") {
  RngStream r(17);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.006);
  // degenerate probabilities never cross
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(r.bernoulli(0.0));
    CHECK(r.bernoulli(1.0));
  }
}

} // TEST_SUITE
