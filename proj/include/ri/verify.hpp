#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ri/graph.hpp"
#include "ri/potential.hpp"
#include "ri/report.hpp"
#include "ri/stats.hpp"

namespace ri {

/// Tolerance policy shared by every statistical test: moment checks pass within
/// `sigmas` standard errors; KS batteries hold family-wise level `family_alpha`
/// by Bonferroni over the KS checks of one report.
struct VerifyOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double sigmas = 4.0;
  double family_alpha = 0.01;
};

/// Window center, its first neighbor, and the first vertex at graph distance 2
/// (whichever of these exist).
std::vector<int> default_coordinates(const WeightedWindow& window);

/// Occupation field plus an independent 0.5 phi^2 against 0.5 (phi + sqrt(2u))^2,
/// both on the killed field of this window.
TestReport isomorphism_test(const WeightedWindow& window, double level, std::span<const int> coords,
                            const VerifyOptions& options);

/// Occupation field plus 0.5 (phi + a)^2 against 0.5 (phi + sqrt(2u + a^2))^2.
TestReport shifted_isomorphism_test(const WeightedWindow& window, double level, double shift,
                                    std::span<const int> coords, const VerifyOptions& options);

/// E[exp(-sum V L)] from each of the three samplers against the exact finite-window
/// value. With a generator, the window-limit value is added to the context.
TestReport laplace_test(const WeightedWindow& window, double level, std::span<const double> potential,
                        const VerifyOptions& options, const GraphGenerator* gen = nullptr,
                        std::span<const int> radii = {}, double tol = 1e-3);

/// P[trace misses K] against exp(-u cap_U(K)). An empty K has probability 1.
TestReport vacant_test(const WeightedWindow& window, std::span<const int> k_set, double level,
                       const VerifyOptions& options);

/// Large-u behaviour along an increasing schedule of levels.
TestReport asymptotics_test(const WeightedWindow& window, std::span<const double> levels,
                            std::span<const int> coords, int base, const VerifyOptions& options);

/// Mean u and covariance 2u g_U(x,y) of the collapse sampler.
TestReport moment_test(const WeightedWindow& window, double level, std::span<const int> coords,
                       const VerifyOptions& options);

/// Collapse vs excursion soup on `coords`, hitting soup vs collapse on K, and the
/// Poisson excursion counts.
TestReport crossval_test(const WeightedWindow& window, double level, std::span<const int> coords,
                         std::span<const int> k_set, const VerifyOptions& options);

/// Hitting identity on `pairs` random (x, K) draws and Green symmetry / PSD on the
/// window. Deterministic in `seed`.
TestReport exact_identity_test(const WeightedWindow& window, std::size_t pairs, std::uint64_t seed);

}  // namespace ri
