#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ri/errors.hpp"
#include "ri/graph.hpp"
#include "ri/potential.hpp"

using namespace ri;

namespace {

using Site = std::array<int, 3>;

int l1(const Site& s) { return std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]); }

Site step(const Site& s, std::mt19937_64& gen) {
  Site t = s;
  const auto k = std::uniform_int_distribution<int>(0, 5)(gen);
  t[static_cast<std::size_t>(k / 2)] += (k % 2) ? 1 : -1;
  return t;
}

struct Sample {
  double mean;
  double se;
};

template <class F>
Sample monte_carlo(int n, F draw) {
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / (n - 1))};
}

std::vector<double> point_mass(const WeightedWindow& w, int x, double v) {
  std::vector<double> out(w.size(), 0.0);
  out[static_cast<std::size_t>(x)] = v;
  return out;
}

}  // namespace

TEST_CASE("single vertex window") {
  LatticeGenerator z3(3);
  const GreenMatrix g = green_killed(build_window(z3, z3.origin(), 0));
  CHECK(g(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("killed green function on an interval") {
  // Simple walk on {0..N} absorbed at 0 and N: expected visits to j from i <= j
  // are 2 i (N - j) / N, and lambda = 2.
  LatticeGenerator z1(1);
  for (int r : {1, 3, 6}) {
    const WeightedWindow w = build_window(z1, z1.origin(), r);
    const GreenMatrix g = green_killed(w);
    const int n = 2 * r + 2;
    for (std::size_t a = 0; a < w.size(); ++a) {
      for (std::size_t b = 0; b < w.size(); ++b) {
        int i = static_cast<int>(w.vertex(a)[0]) + r + 1;
        int j = static_cast<int>(w.vertex(b)[0]) + r + 1;
        if (i > j) std::swap(i, j);
        CHECK(g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) ==
              doctest::Approx(double(i) * (n - j) / n).epsilon(1e-12));
      }
    }
    CHECK(g.asymmetry < 1e-12);
  }
}

TEST_CASE("green function at the origin of Z3 by random walks") {
  LatticeGenerator z3(3);
  const int radius = 6;
  const GreenMatrix g = green_killed(build_window(z3, z3.origin(), radius));
  std::mt19937_64 gen(2024);
  const Sample s = monte_carlo(1000000, [&] {
    Site x{0, 0, 0};
    int visits = 0;
    while (l1(x) <= radius) {
      if (x == Site{0, 0, 0}) ++visits;
      x = step(x, gen);
    }
    return visits / 6.0;
  });
  CHECK(std::abs(g(0, 0) - s.mean) < 4 * s.se);
}

TEST_CASE("green matrix structure") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  const GreenMatrix g = green_killed(w);
  CHECK(g.asymmetry < kGreenAsymmetryTolerance);
  CHECK(g.values == g.values.transpose());
  CHECK(g.min_eigenvalue() > 0.0);
  CHECK(g.values.minCoeff() > 0.0);
  CHECK(g.window_hash == w.hash());

  const int cols[] = {0, 5};
  const Eigen::MatrixXd c = green_columns(w, cols);
  CHECK((c.col(0) - g.values.col(0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c.col(1) - g.values.col(5)).cwiseAbs().maxCoeff() < 1e-12);

  const GreenMatrix gn = green_collapsed(g, 4.0);
  const auto n = g.size();
  REQUIRE(gn.size() == n + 1);
  CHECK(gn(n, n) == 0.25);
  CHECK(gn(0, n) == 0.25);
  CHECK(gn(2, 3) == g(2, 3) + 0.25);
}

TEST_CASE("window limit of the lattice green function") {
  LatticeGenerator z3(3);
  const int radii[] = {2, 4, 6, 8, 10, 12};
  const Vertex o = z3.origin();
  const WindowLimit lim = green_limit(z3, o, o, radii, 2e-3);
  for (std::size_t i = 1; i < lim.iterates.size(); ++i) CHECK(lim.iterates[i] > lim.iterates[i - 1]);
  CHECK(lim.value < 0.252731);
  CHECK(lim.value > 0.24);
  CHECK(lim.iterates.back() - lim.iterates[lim.iterates.size() - 2] < 2e-3);
  const int short_radii[] = {1, 2};
  CHECK_THROWS_AS(green_limit(z3, o, o, short_radii, 1e-6), ConvergenceError);
}

TEST_CASE("equilibrium measure") {
  LatticeGenerator z1(1);
  for (int r : {1, 4}) {
    const WeightedWindow w = build_window(z1, z1.origin(), r);
    const int k[] = {0};
    const EquilibriumMeasure e = equilibrium(w, k);
    CHECK(e.capacity == doctest::Approx(2.0 / (r + 1)).epsilon(1e-12));
  }

  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  const GreenMatrix g = green_killed(w);
  const int origin[] = {0};
  CHECK(equilibrium(w, origin).capacity == doctest::Approx(1.0 / g(0, 0)).epsilon(1e-12));

  // K = U: every path leaves at once from the boundary.
  std::vector<int> all(w.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const EquilibriumMeasure full = equilibrium(w, all);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(full.mass[i] == doctest::Approx(w.boundary_weight(i)).epsilon(1e-12));
  CHECK(full.capacity == doctest::Approx(w.total_boundary_weight()));
}

TEST_CASE("capacity of the origin by escape probability") {
  LatticeGenerator z3(3);
  const int radius = 8;
  const int k[] = {0};
  const double cap = equilibrium(build_window(z3, z3.origin(), radius), k).capacity;
  std::mt19937_64 gen(77);
  const Sample s = monte_carlo(200000, [&] {
    Site x = step(Site{0, 0, 0}, gen);
    while (l1(x) <= radius) {
      if (x == Site{0, 0, 0}) return 0.0;
      x = step(x, gen);
    }
    return 6.0;
  });
  CHECK(std::abs(cap - s.mean) < 4 * s.se);
}

TEST_CASE("hitting probabilities") {
  LatticeGenerator z1(1);
  const int r = 5;
  const WeightedWindow w = build_window(z1, z1.origin(), r);
  const int k[] = {0};
  const std::vector<double> h = hitting_profile(w, k);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = std::abs(static_cast<double>(w.vertex(i)[0]));
    CHECK(h[i] == doctest::Approx((r + 1 - x) / (r + 1)).epsilon(1e-12));
  }

  LatticeGenerator z3(3);
  const WeightedWindow w3 = build_window(z3, z3.origin(), 3);
  const int k3[] = {0, 4, 9, 17};
  const HittingRoutes routes = hitting_routes(w3, k3);
  CHECK(routes.max_difference() < kHittingIdentityTolerance);
  for (int x : k3) CHECK(routes.direct[static_cast<std::size_t>(x)] == 1.0);
  CHECK(hitting_probability(w3, 20, k3) == doctest::Approx(routes.direct[20]).epsilon(1e-14));
}

TEST_CASE("feynman-kac against random walks") {
  LatticeGenerator z3(3);
  const int radius = 3;
  const WeightedWindow w = build_window(z3, z3.origin(), radius);
  const std::vector<double> v = point_mass(w, 0, 2.0);
  const PotentialFunction fk = feynman_kac(w, v);
  std::mt19937_64 gen(5);
  std::exponential_distribution<double> hold(1.0);
  for (const Site start : {Site{0, 0, 0}, Site{1, 0, 0}, Site{2, 1, 0}}) {
    const Sample s = monte_carlo(200000, [&] {
      Site x = start;
      double integral = 0.0;
      while (l1(x) <= radius) {
        if (x == Site{0, 0, 0}) integral += (2.0 / 6.0) * hold(gen);
        x = step(x, gen);
      }
      return std::exp(-integral);
    });
    const int i = w.index_of(Vertex{start[0], start[1], start[2]});
    CHECK(std::abs(fk.values[static_cast<std::size_t>(i)] - s.mean) < 4 * s.se);
  }
}

TEST_CASE("exact laplace transform for a point potential") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  const GreenMatrix g = green_killed(w);
  for (double v : {0.1, 1.0, 5.0}) {
    for (double u : {0.0, 0.5, 2.0}) {
      const double closed = std::exp(-u * v / (1.0 + g(0, 0) * v));
      CHECK(laplace_exact_finite(w, point_mass(w, 0, v), u) == doctest::Approx(closed).epsilon(1e-12));
    }
  }
  std::vector<double> zero(w.size(), 0.0);
  CHECK(laplace_exact_finite(w, zero, 3.0) == 1.0);
}

TEST_CASE("finite form equals resolvent form for spread potentials") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> v(w.size(), 0.0);
    for (int j = 0; j < 4; ++j) v[static_cast<std::size_t>(gen() % w.size())] = 2.0 * unit(gen);
    const double u = 1.5;
    const double finite = laplace_exact_finite(w, v, u);
    CHECK(finite == doctest::Approx(std::exp(-u * laplace_exponent_killed(w, v))).epsilon(1e-10));
    // K larger than supp V gives the same value.
    std::vector<int> k = support_of(v);
    k.push_back(0);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    CHECK(laplace_exact_finite(w, v, k, u) == doctest::Approx(finite).epsilon(1e-10));
  }
}

TEST_CASE("laplace limit") {
  LatticeGenerator z3(3);
  const int radii[] = {2, 4, 6, 8, 10};
  const VertexFunction v{{z3.origin(), 1.0}};
  const LaplaceLimit lim = laplace_exact_limit(z3, v, 1.0, radii, 2e-3);
  CHECK(lim.sup_gv < 1.0);
  CHECK(lim.value == doctest::Approx(std::exp(-lim.exponent)).epsilon(1e-14));
  const VertexFunction big{{z3.origin(), 10.0}};
  CHECK_THROWS_AS(laplace_exact_limit(z3, big, 1.0, radii, 2e-3), PreconditionError);
}

TEST_CASE("collapsed resolvent identity") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 3);
  const ResolventIdentity r = resolvent_identity(w, point_mass(w, 0, 0.1), 10.0);
  CHECK(std::abs(r.direct - r.reduced) < kResolventTolerance);
  CHECK(std::abs(r.direct - r.one_minus_b_over_rate) < kResolventTolerance);
  CHECK(r.smallness < 1.0);
  CHECK(resolvent_check(w, point_mass(w, 0, 0.1), 10.0).pass());
  CHECK_THROWS_AS(resolvent_identity(w, point_mass(w, 0, 5.0), 10.0), PreconditionError);
}

TEST_CASE("domain errors") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 2);
  CHECK_THROWS_AS(potential_on(w, VertexFunction{{z3.origin(), -1.0}}), DomainError);
  CHECK_THROWS_AS(potential_on(w, VertexFunction{{Vertex{9, 9, 9}, 1.0}}), DomainError);
  CHECK_THROWS_AS(laplace_exact_finite(w, point_mass(w, 0, 1.0), -1.0), DomainError);
}
