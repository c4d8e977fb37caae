#include "ri/interlace.hpp"

#include <algorithm>
#include <cmath>

#include "ri/errors.hpp"
#include "ri/parallel.hpp"

namespace ri {

namespace {

void require_level(double level) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("level u must be finite and >= 0");
}

/// Runs the walk from `start` until it steps onto the star (i.e. leaves the
/// window), adding holding_time / lambda_x at every visited x allowed by `mask`.
std::uint64_t run_killed_walk(const CollapsedChain& chain, int start, Rng& rng, std::vector<double>& occupation,
                              const std::vector<char>* mask, ExcursionRecord* record) {
  const int star = chain.star();
  std::uint64_t steps = 0;
  int x = start;
  while (x != star) {
    const auto xs = static_cast<std::size_t>(x);
    const double holding = rng.exponential();
    if (!mask || (*mask)[xs]) occupation[xs] += holding / chain.lambda(xs);
    if (record) {
      record->vertices.push_back(x);
      record->holding_times.push_back(holding);
    }
    x = chain.step(xs, rng.uniform());
    ++steps;
  }
  return steps;
}

OccupationField empty_field(const CollapsedChain& chain, double level, SamplerKind kind) {
  OccupationField field;
  field.values.assign(chain.window_size(), 0.0);
  field.level = level;
  field.sampler = kind;
  field.window_hash = chain.window().hash();
  return field;
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::collapse: return "collapse";
    case SamplerKind::excursion_soup: return "excursion";
    case SamplerKind::hitting_soup: return "hitting";
  }
  return "unknown";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "collapse") return SamplerKind::collapse;
  if (name == "excursion") return SamplerKind::excursion_soup;
  if (name == "hitting") return SamplerKind::hitting_soup;
  throw DomainError("unknown sampler '" + std::string(name) + "'");
}

OccupationField simulate_collapse(const CollapsedChain& chain, double level, Rng& rng,
                                  std::vector<ExcursionRecord>* records) {
  require_level(level);
  OccupationField field = empty_field(chain, level, SamplerKind::collapse);
  if (level == 0.0) return field;  // tau_0 = 0

  const int star = chain.star();
  const double star_lambda = chain.lambda(static_cast<std::size_t>(star));
  double star_time = 0.0;
  for (;;) {
    const double increment = rng.exponential() / star_lambda;
    if (star_time + increment > level) {
      star_time = level;
      break;
    }
    star_time += increment;
    const int start = chain.step(static_cast<std::size_t>(star), rng.uniform());
    ExcursionRecord* record = nullptr;
    if (records) {
      record = &records->emplace_back();
      record->start = start;
      record->termination = Termination::returned_to_star;
    }
    field.steps += 1 + run_killed_walk(chain, start, rng, field.values, nullptr, record);
    ++field.excursions;
  }
  field.star_local_time = star_time;
  return field;
}

OccupationField sample_excursion_soup(const CollapsedChain& chain, double level, Rng& rng,
                                      std::vector<ExcursionRecord>* records) {
  require_level(level);
  OccupationField field = empty_field(chain, level, SamplerKind::excursion_soup);
  const auto star = static_cast<std::size_t>(chain.star());
  field.excursions = poisson(rng, level * chain.lambda(star));
  for (std::uint64_t e = 0; e < field.excursions; ++e) {
    const int start = chain.step(star, rng.uniform());
    ExcursionRecord* record = nullptr;
    if (records) {
      record = &records->emplace_back();
      record->start = start;
      record->termination = Termination::exited_window;
    }
    field.steps += run_killed_walk(chain, start, rng, field.values, nullptr, record);
  }
  return field;
}

OccupationField sample_hitting_soup(const CollapsedChain& chain, const EquilibriumMeasure& measure, double level,
                                    Rng& rng, std::vector<ExcursionRecord>* records) {
  require_level(level);
  if (measure.mass.size() != chain.window_size()) throw DomainError("equilibrium measure from another window");
  OccupationField field = empty_field(chain, level, SamplerKind::hitting_soup);
  if (measure.support.empty() || !(measure.capacity > 0.0)) return field;

  std::vector<char> mask(chain.window_size(), 0);
  std::vector<double> cumulative;
  double running = 0.0;
  for (int x : measure.support) {
    mask[static_cast<std::size_t>(x)] = 1;
    running += measure.mass[static_cast<std::size_t>(x)];
    cumulative.push_back(running);
  }

  field.excursions = poisson(rng, level * measure.capacity);
  for (std::uint64_t e = 0; e < field.excursions; ++e) {
    const double target = rng.uniform() * running;
    const auto pos = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), target) -
                                              cumulative.begin());
    const int start = measure.support[std::min(pos, measure.support.size() - 1)];
    ExcursionRecord* record = nullptr;
    if (records) {
      record = &records->emplace_back();
      record->start = start;
      record->termination = Termination::exited_window;
    }
    field.steps += run_killed_walk(chain, start, rng, field.values, &mask, record);
  }
  return field;
}

std::vector<int> interlacement_set(const OccupationField& field) {
  std::vector<int> set;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (field.values[i] > 0.0) set.push_back(static_cast<int>(i));
  }
  return set;
}

OccupationBatch sample_occupation(SamplerKind kind, const CollapsedChain& chain, double level, std::size_t count,
                                  std::uint64_t seed, unsigned workers, const EquilibriumMeasure* measure) {
  require_level(level);
  if (kind == SamplerKind::hitting_soup && !measure) throw DomainError("hitting soup needs an equilibrium measure");
  OccupationBatch batch;
  batch.sampler = kind;
  batch.level = level;
  batch.seed = seed;
  batch.window_hash = chain.window().hash();
  batch.values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(chain.window_size()));
  batch.excursions.assign(count, 0);
  parallel_for(count, workers, [&](std::size_t i) {
    Rng rng(seed, i);
    OccupationField field;
    switch (kind) {
      case SamplerKind::collapse: field = simulate_collapse(chain, level, rng); break;
      case SamplerKind::excursion_soup: field = sample_excursion_soup(chain, level, rng); break;
      case SamplerKind::hitting_soup: field = sample_hitting_soup(chain, *measure, level, rng); break;
    }
    batch.values.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(field.values.data(), static_cast<Eigen::Index>(field.values.size()));
    batch.excursions[i] = field.excursions;
  });
  return batch;
}

}  // namespace ri
