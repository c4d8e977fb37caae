#include <doctest.h>

#include <cmath>
#include <vector>

#include "ri/errors.hpp"
#include "ri/graph.hpp"
#include "ri/interlace.hpp"
#include "ri/potential.hpp"
#include "ri/stats.hpp"

using namespace ri;

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

CollapsedChain lattice_chain(int radius) {
  LatticeGenerator z3(3);
  return collapse(build_window(z3, z3.origin(), radius));
}

}  // namespace

TEST_CASE("level zero gives the empty field") {
  const CollapsedChain chain = lattice_chain(2);
  Rng rng(1, 0);
  for (auto field : {simulate_collapse(chain, 0.0, rng), sample_excursion_soup(chain, 0.0, rng)}) {
    CHECK(field.excursions == 0);
    for (double v : field.values) CHECK(v == 0.0);
    CHECK(interlacement_set(field).empty());
  }
  CHECK_THROWS_AS(simulate_collapse(chain, -1.0, rng), DomainError);
}

TEST_CASE("collapse stops at exactly u") {
  const CollapsedChain chain = lattice_chain(2);
  for (double u : {0.3, 1.0, 7.5}) {
    Rng rng(4, static_cast<std::uint64_t>(u * 10));
    std::vector<ExcursionRecord> records;
    const OccupationField f = simulate_collapse(chain, u, rng, &records);
    CHECK(f.star_local_time == u);
    CHECK(records.size() == f.excursions);
    for (const ExcursionRecord& r : records) {
      CHECK(r.termination == Termination::returned_to_star);
      CHECK(r.vertices.size() == r.holding_times.size());
      CHECK(chain.window().boundary_weight(static_cast<std::size_t>(r.start)) > 0.0);
    }
    // Occupation is the sum of holding times over lambda.
    std::vector<double> total(chain.window_size(), 0.0);
    for (const ExcursionRecord& r : records) {
      for (std::size_t k = 0; k < r.vertices.size(); ++k) {
        const auto x = static_cast<std::size_t>(r.vertices[k]);
        total[x] += r.holding_times[k] / chain.window().lambda(x);
      }
    }
    for (std::size_t x = 0; x < total.size(); ++x) CHECK(total[x] == doctest::Approx(f.values[x]).epsilon(1e-12));
  }
}

TEST_CASE("single vertex window is a compound poisson sum") {
  // Every excursion visits the origin once, N ~ Poisson(6u), L = Gamma(N) / 6.
  const CollapsedChain chain = lattice_chain(0);
  const double u = 0.7;
  for (SamplerKind kind : {SamplerKind::collapse, SamplerKind::excursion_soup}) {
    const OccupationBatch b = sample_occupation(kind, chain, u, 40000, 21, 2);
    const auto l = column(b.values, 0);
    const Estimate m = mean_estimate(l);
    const Estimate v = variance_estimate(l);
    CHECK(std::abs(m.value - u) < 4 * m.standard_error);
    CHECK(std::abs(v.value - u / 3.0) < 4 * v.standard_error);
    std::vector<double> zero(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) zero[i] = l[i] == 0.0 ? 1.0 : 0.0;
    const Estimate p = mean_estimate(zero);
    const double oracle = std::exp(-6 * u);
    CHECK(std::abs(p.value - oracle) < 4 * std::sqrt(oracle * (1 - oracle) / l.size()));
  }
}

TEST_CASE("occupation moments on a lattice window") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 2);
  const CollapsedChain chain = collapse(w);
  const GreenMatrix g = green_killed(w);
  const double u = 1.3;
  for (SamplerKind kind : {SamplerKind::collapse, SamplerKind::excursion_soup}) {
    const OccupationBatch b = sample_occupation(kind, chain, u, 20000, 8, 2);
    for (Eigen::Index x : {0, 1, 10}) {
      const Estimate m = mean_estimate(column(b.values, x));
      CHECK(std::abs(m.value - u) < 4 * m.standard_error);
      const Estimate c = covariance_estimate(column(b.values, 0), column(b.values, x));
      CHECK(std::abs(c.value - 2 * u * g(0, x)) < 4 * c.standard_error);
    }
    std::vector<double> counts(b.excursions.begin(), b.excursions.end());
    const Estimate n = mean_estimate(counts);
    const double expected = u * w.total_boundary_weight();
    CHECK(std::abs(n.value - expected) < 4 * std::sqrt(expected / counts.size()));
  }
}

TEST_CASE("hitting soup") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  const CollapsedChain chain = collapse(w);
  const int k[] = {0, 1};
  const EquilibriumMeasure e = equilibrium(w, k);
  const double u = 2.0;
  const OccupationBatch h = sample_occupation(SamplerKind::hitting_soup, chain, u, 20000, 12, 2, &e);
  const OccupationBatch c = sample_occupation(SamplerKind::collapse, chain, u, 20000, 13, 2);
  for (Eigen::Index x = 2; x < h.values.cols(); ++x) CHECK(h.values.col(x).cwiseAbs().maxCoeff() == 0.0);
  for (int x : k) {
    const KsResult ks = two_sample_ks(column(h.values, x), column(c.values, x));
    CHECK(ks.p_value > 0.005);
  }
  std::vector<double> counts(h.excursions.begin(), h.excursions.end());
  const Estimate n = mean_estimate(counts);
  CHECK(std::abs(n.value - u * e.capacity) < 4 * std::sqrt(u * e.capacity / counts.size()));
  CHECK_THROWS_AS(sample_occupation(SamplerKind::hitting_soup, chain, u, 10, 1, 1, nullptr), DomainError);
}

TEST_CASE("batches do not depend on worker count") {
  const CollapsedChain chain = lattice_chain(2);
  for (SamplerKind kind : {SamplerKind::collapse, SamplerKind::excursion_soup}) {
    const OccupationBatch a = sample_occupation(kind, chain, 1.0, 301, 5, 1);
    const OccupationBatch b = sample_occupation(kind, chain, 1.0, 301, 5, 4);
    CHECK(a.values == b.values);
    CHECK(a.excursions == b.excursions);
    Rng rng(5, 77);
    const OccupationField f = kind == SamplerKind::collapse ? simulate_collapse(chain, 1.0, rng)
                                                            : sample_excursion_soup(chain, 1.0, rng);
    for (std::size_t x = 0; x < f.values.size(); ++x) CHECK(f.values[x] == a.values(77, static_cast<Eigen::Index>(x)));
  }
}

TEST_CASE("sampler names") {
  CHECK(parse_sampler("collapse") == SamplerKind::collapse);
  CHECK(parse_sampler("excursion") == SamplerKind::excursion_soup);
  CHECK(parse_sampler("hitting") == SamplerKind::hitting_soup);
  CHECK(to_string(SamplerKind::excursion_soup) == "excursion");
  CHECK_THROWS_AS(parse_sampler("bogus"), DomainError);
}
