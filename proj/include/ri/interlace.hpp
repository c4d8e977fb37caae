#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ri/graph.hpp"
#include "ri/potential.hpp"
#include "ri/rng.hpp"

namespace ri {

enum class SamplerKind { collapse, excursion_soup, hitting_soup };

std::string to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

/// Occupation values (time at x divided by lambda_x) on the window vertices.
struct OccupationField {
  std::vector<double> values;
  double level = 0.0;
  SamplerKind sampler = SamplerKind::collapse;
  std::uint64_t window_hash = 0;
  /// Number of excursions (collapse, excursion soup) or trajectories (hitting soup).
  std::uint64_t excursions = 0;
  /// Local time at the star when the collapse sampler stopped; equals `level`.
  double star_local_time = 0.0;
  /// Jumps of the embedded chain.
  std::uint64_t steps = 0;
};

enum class Termination { returned_to_star, exited_window };

/// One excursion: visited window vertices with their Exp(1) holding times.
struct ExcursionRecord {
  int start = 0;
  std::vector<int> vertices;
  std::vector<double> holding_times;
  Termination termination = Termination::exited_window;
};

/// Runs the collapsed chain from the star until its local time there reaches
/// `level`, truncating the last holding interval at the star exactly. Records
/// excursions when `records` is non-null.
OccupationField simulate_collapse(const CollapsedChain& chain, double level, Rng& rng,
                                  std::vector<ExcursionRecord>* records = nullptr);

/// Poisson(level * lambda_star) excursions started from the boundary weights and
/// run as the graph walk killed on exiting the window.
OccupationField sample_excursion_soup(const CollapsedChain& chain, double level, Rng& rng,
                                      std::vector<ExcursionRecord>* records = nullptr);

/// Poisson(level * cap_U(K)) killed walks started from e_{K,U} / cap_U(K); only
/// occupation on K is recorded.
OccupationField sample_hitting_soup(const CollapsedChain& chain, const EquilibriumMeasure& measure, double level,
                                    Rng& rng, std::vector<ExcursionRecord>* records = nullptr);

/// {x : field(x) > 0} as window indices.
std::vector<int> interlacement_set(const OccupationField& field);

/// Rows are samples, columns are window vertices.
struct OccupationBatch {
  Eigen::MatrixXd values;
  std::vector<std::uint64_t> excursions;
  SamplerKind sampler = SamplerKind::collapse;
  double level = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t window_hash = 0;
};

/// Sample i is drawn from Rng(seed, i). `measure` is required for the hitting soup.
OccupationBatch sample_occupation(SamplerKind kind, const CollapsedChain& chain, double level, std::size_t count,
                                  std::uint64_t seed, unsigned workers = 1,
                                  const EquilibriumMeasure* measure = nullptr);

}  // namespace ri
