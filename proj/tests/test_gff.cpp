#include <doctest.h>

#include <cmath>
#include <vector>

#include "ri/errors.hpp"
#include "ri/gff.hpp"
#include "ri/graph.hpp"
#include "ri/stats.hpp"

using namespace ri;

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

GreenMatrix window_green(int radius) {
  LatticeGenerator z3(3);
  return green_killed(build_window(z3, z3.origin(), radius));
}

}  // namespace

TEST_CASE("sample covariance matches g") {
  const GreenMatrix g = window_green(2);
  const GaussianSampleBatch batch = sample_gff(g, 40000, 17, 2);
  CHECK(batch.jitter == 0.0);
  CHECK(batch.covariance_hash == g.hash());
  for (Eigen::Index x : {0, 1, 7}) {
    const Estimate m = mean_estimate(column(batch.samples, x));
    CHECK(std::abs(m.value) < 4 * m.standard_error);
    for (Eigen::Index y : {0, 3, 12}) {
      const Estimate c = covariance_estimate(column(batch.samples, x), column(batch.samples, y));
      CAPTURE(x);
      CAPTURE(y);
      CHECK(std::abs(c.value - g(x, y)) < 4 * c.standard_error);
    }
  }
}

TEST_CASE("scaling the covariance by 4 doubles every sample exactly") {
  const GreenMatrix g = window_green(2);
  GreenMatrix g4 = g;
  g4.values *= 4.0;
  const GaussianSampleBatch a = sample_gff(g, 50, 3);
  const GaussianSampleBatch b = sample_gff(g4, 50, 3);
  CHECK(b.samples == 2.0 * a.samples);
}

TEST_CASE("batches do not depend on worker count") {
  const GreenMatrix g = window_green(3);
  const GaussianSampleBatch a = sample_gff(g, 257, 9, 1);
  const GaussianSampleBatch b = sample_gff(g, 257, 9, 4);
  CHECK(a.samples == b.samples);
  Rng rng(9, 100);
  CHECK(GffSampler(g).sample(rng) == a.samples.row(100).transpose());
}

TEST_CASE("jitter policy") {
  GreenMatrix singular;
  singular.values = Eigen::MatrixXd::Ones(2, 2);
  const GffSampler s(singular);
  CHECK(s.jitter() > 0.0);
  CHECK(s.jitter() <= 1e-9);

  GreenMatrix indefinite;
  indefinite.values = Eigen::MatrixXd{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS(GffSampler{indefinite}, DomainError);
}

TEST_CASE("shifted square field") {
  Eigen::MatrixXd phi{{1.0, -2.0}, {0.0, 0.5}};
  const Eigen::MatrixXd s = shifted_square_field(phi, 1.0);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);
  CHECK(s(1, 1) == 1.125);
}
