#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "ri/errors.hpp"
#include "ri/graph.hpp"

using namespace ri;

namespace {

/// Star graph whose center reports weight 2 to leaf 1 while the leaf reports 1.
class Lopsided final : public GraphGenerator {
 public:
  std::vector<WeightedEdge> neighbors(const Vertex& x) const override {
    if (x == Vertex{0}) return {{{1}, 2.0}, {{2}, 1.0}};
    return {{{0}, 1.0}, {{x[0] + 10}, 1.0}};
  }
  Vertex origin() const override { return {0}; }
  std::string name() const override { return "lopsided"; }
  bool declared_transient() const override { return true; }
};

class Isolated final : public GraphGenerator {
 public:
  std::vector<WeightedEdge> neighbors(const Vertex&) const override { return {}; }
  Vertex origin() const override { return {0}; }
  std::string name() const override { return "isolated"; }
  bool declared_transient() const override { return false; }
};

}  // namespace

TEST_CASE("vertex text round trip") {
  CHECK(to_string(Vertex{1, 0, -2}) == "(1,0,-2)");
  CHECK(parse_vertex("1,0,-2") == Vertex{1, 0, -2});
  CHECK(parse_vertex("(1, 0, -2)") == Vertex{1, 0, -2});
  CHECK(parse_vertex("()").empty());
  CHECK_THROWS_AS(parse_vertex("1,,2"), DomainError);
  LatticeGenerator z3(3);
  CHECK(z3.resolve("origin") == Vertex{0, 0, 0});
}

TEST_CASE("lattice window of radius 1") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 1);
  REQUIRE(w.size() == 7);
  CHECK(w.vertex(0) == Vertex{0, 0, 0});
  CHECK(w.boundary_weight(0) == 0.0);
  for (std::size_t i = 1; i < 7; ++i) {
    CHECK(w.lambda(i) == 6.0);
    CHECK(w.boundary_weight(i) == 5.0);
    CHECK(w.internal_weight(0, i) == 1.0);
    CHECK(w.internal_weight(i, 0) == 1.0);
  }
  CHECK(w.total_boundary_weight() == 30.0);
  CHECK(w.to_json()["schema"] == "ri.window/1");
}

TEST_CASE("ball sizes") {
  // |{x in Z^3 : |x|_1 <= r}| = (2r+1)(2r^2+2r+3)/3
  LatticeGenerator z3(3);
  for (int r = 0; r <= 5; ++r) {
    CHECK(build_window(z3, z3.origin(), r).size() == static_cast<std::size_t>((2 * r + 1) * (2 * r * r + 2 * r + 3) / 3));
  }
  TreeGenerator t2(2);
  CHECK(build_window(t2, t2.origin(), 3).size() == 15);
  const WeightedWindow tw = build_window(t2, t2.origin(), 3);
  CHECK(tw.lambda(0) == 2.0);
  CHECK(tw.total_boundary_weight() == 16.0);
}

TEST_CASE("window hash depends on weights and radius") {
  LatticeGenerator z3(3);
  const auto a = build_window(z3, z3.origin(), 2).hash();
  CHECK(a == build_window(z3, z3.origin(), 2).hash());
  CHECK(a != build_window(z3, z3.origin(), 3).hash());
  CHECK(a != build_window(z3, Vertex{1, 0, 0}, 2).hash());
}

TEST_CASE("edge lists") {
  std::istringstream in("# path\n0 1 1.5\n1 2 2\n\n2 1 2\n");
  const EdgeListGenerator g = EdgeListGenerator::parse(in);
  CHECK(g.origin() == Vertex{0});
  const auto nb = g.neighbors({1});
  REQUIRE(nb.size() == 2);
  double total = 0;
  for (const auto& e : nb) total += e.weight;
  CHECK(total == 3.5);

  const EdgeListGenerator::Edge loop[] = {{0, 0, 1.0}};
  CHECK_THROWS_AS(EdgeListGenerator{loop}, StructuralError);
  const EdgeListGenerator::Edge negative[] = {{0, 1, -1.0}};
  CHECK_THROWS_AS(EdgeListGenerator{negative}, StructuralError);
  const EdgeListGenerator::Edge conflict[] = {{0, 1, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(EdgeListGenerator{conflict}, StructuralError);
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(build_window(Lopsided{}, {0}, 2), StructuralError);
  CHECK_THROWS_AS(build_window(Isolated{}, {0}, 1), StructuralError);

  const EdgeListGenerator::Edge triangle[] = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
  const EdgeListGenerator closed{triangle};
  const WeightedWindow w = build_window(closed, closed.origin(), 5);
  CHECK(w.size() == 3);
  CHECK(w.total_boundary_weight() == 0.0);
  CHECK_THROWS_AS(collapse(w), StructuralError);

  std::vector<Vertex> vs{{0}, {1}};
  CHECK_THROWS_AS(WeightedWindow(vs, {{}, {}}, {1.0, 1.0}, {1.0, 1.0}), StructuralError);
  CHECK_THROWS_AS(WeightedWindow(vs, {{{1, 1.0}}, {{0, 2.0}}}, {1.0, 1.0}, {2.0, 3.0}), StructuralError);
  CHECK_THROWS_AS(WeightedWindow(vs, {{{1, 1.0}}, {{0, 1.0}}}, {1.0, 1.0}, {2.0, 2.5}), StructuralError);
}

TEST_CASE("collapsed chain") {
  LatticeGenerator z3(3);
  const WeightedWindow w = build_window(z3, z3.origin(), 2);
  const CollapsedChain chain = collapse(w);
  const std::size_t n = w.size();
  CHECK(chain.state_count() == n + 1);
  CHECK(chain.star() == static_cast<int>(n));
  CHECK(chain.lambda(n) == w.total_boundary_weight());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(chain.weight(i, n) == w.boundary_weight(i));
    CHECK(chain.weight(n, i) == w.boundary_weight(i));
  }
  const Eigen::MatrixXd p = transition_matrix(chain);
  CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) == 0.0);
  const Eigen::MatrixXd q = transition_matrix(w);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(q.row(static_cast<Eigen::Index>(i)).sum() ==
          doctest::Approx(1.0 - w.boundary_weight(i) / w.lambda(i)).epsilon(1e-14));
  }

  // Inverse transform sampling: u just below a cumulative boundary lands on its target.
  for (std::size_t i = 0; i <= n; ++i) {
    double previous = 0.0;
    for (const Transition& t : chain.transitions(i)) {
      const double lam = chain.lambda(i);
      const double mid = 0.5 * (previous + t.cumulative) / lam;
      CHECK(chain.step(i, mid) == t.target);
      previous = t.cumulative;
    }
  }
}
