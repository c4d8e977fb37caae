#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ri {

/// Philox4x32-10 block function (Salmon et al., counter-based).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream identified by (seed, stream).
///
/// Every draw is a pure function of (seed, stream, draw position), so work split
/// across threads by stream index reproduces bit-for-bit regardless of the split.
/// All continuous variates are produced here rather than through <random>
/// distributions, whose algorithms differ between standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }
  /// Exp(1).
  double exponential();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_word_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Poisson variate with the given mean: sequential inversion below 30, PTRS
/// transformed rejection (Hormann 1993) above. Both are exact.
std::uint64_t poisson(Rng& rng, double mean);

/// Independent seed for a named purpose (e.g. "gff-left"), so that sub-streams of
/// one run never overlap.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ri
