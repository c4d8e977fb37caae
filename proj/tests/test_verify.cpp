#include <doctest.h>

#include <vector>

#include "ri/graph.hpp"
#include "ri/verify.hpp"

using namespace ri;

namespace {

WeightedWindow lattice(int radius) {
  LatticeGenerator z3(3);
  return build_window(z3, z3.origin(), radius);
}

VerifyOptions small(std::uint64_t seed = 1) {
  VerifyOptions o;
  o.samples = 3000;
  o.seed = seed;
  o.workers = 2;
  return o;
}

}  // namespace

TEST_CASE("default coordinates") {
  const WeightedWindow w = lattice(2);
  const std::vector<int> c = default_coordinates(w);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 0);
  CHECK(w.internal_weight(0, static_cast<std::size_t>(c[1])) == 1.0);
  const Vertex& far = w.vertex(static_cast<std::size_t>(c[2]));
  CHECK(std::abs(far[0]) + std::abs(far[1]) + std::abs(far[2]) == 2);
  CHECK(default_coordinates(lattice(0)).size() == 1);
}

TEST_CASE("isomorphism batteries pass on a small window") {
  const WeightedWindow w = lattice(2);
  const std::vector<int> c = default_coordinates(w);
  const TestReport zero = isomorphism_test(w, 0.0, c, small());
  CHECK(zero.pass());
  const TestReport one = isomorphism_test(w, 1.0, c, small(2));
  CHECK(one.pass());
  const TestReport shifted = shifted_isomorphism_test(w, 0.5, 1.0, c, small(3));
  CHECK(shifted.pass());
  CHECK(shifted.context["ks_family_size"] == c.size());
  const nlohmann::json j = shifted.to_json();
  CHECK(j["schema"] == "ri.report/1");
  CHECK(j["seed"] == 3);
}

TEST_CASE("laplace, vacant, moments and crossval") {
  const WeightedWindow w = lattice(2);
  std::vector<double> v(w.size(), 0.0);
  v[0] = 1.0;
  CHECK(laplace_test(w, 1.0, v, small()).pass());
  const int k[] = {0};
  CHECK(vacant_test(w, k, 0.5, small()).pass());
  const std::vector<int> c = default_coordinates(w);
  CHECK(moment_test(w, 1.0, c, small()).pass());
  CHECK(crossval_test(w, 1.0, c, k, small()).pass());
}

TEST_CASE("asymptotics on a small schedule") {
  const WeightedWindow w = lattice(1);
  const double levels[] = {1.0, 5.0, 20.0};
  const std::vector<int> c = default_coordinates(w);
  const TestReport r = asymptotics_test(w, levels, c, 0, small());
  CHECK(r.pass());
}

TEST_CASE("exact identities") {
  const TestReport r = exact_identity_test(lattice(3), 20, 4);
  CHECK(r.pass());
  CHECK(r.parameters["pairs"] == 20);
  CHECK(r.checks.size() == 4);
}

TEST_CASE("a wrong oracle fails") {
  TestReport r;
  r.add_sigma("deliberately off", 1.0, 0.0, 0.1, 4.0);
  CHECK_FALSE(r.pass());
  TestReport ks;
  ks.add_ks("ks", 0.5, 1e-6, 0.01);
  CHECK_FALSE(ks.pass());
}
