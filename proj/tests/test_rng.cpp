#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ri/rng.hpp"
#include "ri/stats.hpp"

using namespace ri;

TEST_CASE("philox known-answer vectors") {
  using W = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    firsts.insert(x);
  }
  CHECK(firsts.size() == 100);
  CHECK(Rng(7, 3).next_u64() != c.next_u64());
  CHECK(Rng(7, 3).next_u64() != d.next_u64());
  CHECK(derive_seed(1, "gff-left") != derive_seed(1, "gff-right"));
  CHECK(derive_seed(1, "gff-left") == derive_seed(1, "gff-left"));
}

TEST_CASE("uniform, exponential and normal moments") {
  Rng rng(11, 0);
  const int n = 200000;
  std::vector<double> u(n), e(n), z(n);
  for (int i = 0; i < n; ++i) {
    u[i] = rng.uniform();
    e[i] = rng.exponential();
    z[i] = rng.normal();
    REQUIRE(u[i] >= 0.0);
    REQUIRE(u[i] < 1.0);
    REQUIRE(e[i] > 0.0);
  }
  const Estimate mu = mean_estimate(u);
  CHECK(std::abs(mu.value - 0.5) < 4 * mu.standard_error);
  const Estimate me = mean_estimate(e);
  CHECK(std::abs(me.value - 1.0) < 4 * me.standard_error);
  const Estimate ve = variance_estimate(e);
  CHECK(std::abs(ve.value - 1.0) < 4 * ve.standard_error);
  const Estimate mz = mean_estimate(z);
  CHECK(std::abs(mz.value) < 4 * mz.standard_error);
  const Estimate vz = variance_estimate(z);
  CHECK(std::abs(vz.value - 1.0) < 4 * vz.standard_error);
}

TEST_CASE("poisson mean and variance on both branches") {
  for (double mean : {0.0, 0.3, 4.0, 29.5, 30.0, 75.0, 1200.0}) {
    Rng rng(5, static_cast<std::uint64_t>(mean * 10));
    const int n = 100000;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<double>(poisson(rng, mean));
    const Estimate m = mean_estimate(x);
    const Estimate v = variance_estimate(x);
    CAPTURE(mean);
    if (mean == 0.0) {
      CHECK(m.value == 0.0);
      continue;
    }
    CHECK(std::abs(m.value - mean) < 4 * std::sqrt(mean / n));
    CHECK(std::abs(v.value - mean) < 4 * v.standard_error);
  }
}

TEST_CASE("poisson pmf at small mean") {
  Rng rng(9, 0);
  const int n = 200000;
  const double mean = 2.5;
  std::vector<int> counts(8, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = poisson(rng, mean);
    if (k < counts.size()) ++counts[k];
  }
  for (int k = 0; k < 8; ++k) {
    const double p = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(counts[k] / double(n) - p) < 4 * se);
  }
}

TEST_CASE("poisson pmf at large mean") {
  Rng rng(10, 0);
  const int n = 200000;
  const double mean = 40.0;
  std::vector<int> counts(80, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = poisson(rng, mean);
    if (k < counts.size()) ++counts[k];
  }
  for (int k = 30; k < 50; ++k) {
    const double p = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    const double se = std::sqrt(p * (1 - p) / n);
    CAPTURE(k);
    CHECK(std::abs(counts[k] / double(n) - p) < 4.5 * se);
  }
}
