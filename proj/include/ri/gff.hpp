#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "ri/potential.hpp"
#include "ri/rng.hpp"

namespace ri {

/// Cholesky factor of a Green matrix, with the diagonal jitter that was needed.
///
/// Jitter policy: on failure add 1e-12 * trace / dim to the diagonal and retry,
/// escalating x10, at most three retries.
class GffSampler {
 public:
  explicit GffSampler(const GreenMatrix& green);

  /// One centered Gaussian vector; consumes dim standard normals from `rng`.
  Eigen::VectorXd sample(Rng& rng) const;

  const Eigen::MatrixXd& factor() const { return factor_; }
  double jitter() const { return jitter_; }
  Eigen::Index dimension() const { return factor_.rows(); }

 private:
  Eigen::MatrixXd factor_;  // lower triangular
  double jitter_ = 0.0;
};

/// Rows are samples, columns are window vertices.
struct GaussianSampleBatch {
  Eigen::MatrixXd samples;
  std::uint64_t seed = 0;
  std::uint64_t window_hash = 0;
  std::uint64_t covariance_hash = 0;
  double jitter = 0.0;
};

/// Sample i is drawn from Rng(seed, i), so the batch does not depend on `workers`.
GaussianSampleBatch sample_gff(const GreenMatrix& green, std::size_t count, std::uint64_t seed,
                               unsigned workers = 1);

/// Entrywise 0.5 * (phi + shift)^2.
Eigen::MatrixXd shifted_square_field(const GaussianSampleBatch& batch, double shift);
Eigen::MatrixXd shifted_square_field(const Eigen::MatrixXd& phi, double shift);

}  // namespace ri
