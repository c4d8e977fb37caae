#include "ri/gff.hpp"

#include <string>

#include "ri/errors.hpp"
#include "ri/parallel.hpp"

namespace ri {

GffSampler::GffSampler(const GreenMatrix& green) {
  const Eigen::Index n = green.size();
  if (n == 0) throw DomainError("empty covariance");
  const double base = 1e-12 * green.values.trace() / static_cast<double>(n);
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Eigen::MatrixXd cov = green.values;
    cov.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = jitter;
      return;
    }
    jitter = attempt == 0 ? base : jitter * 10.0;
  }
  throw DomainError("covariance not PSD: Cholesky failed with jitter " + std::to_string(jitter / 10.0));
}

Eigen::VectorXd GffSampler::sample(Rng& rng) const {
  Eigen::VectorXd z(factor_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return factor_.triangularView<Eigen::Lower>() * z;
}

GaussianSampleBatch sample_gff(const GreenMatrix& green, std::size_t count, std::uint64_t seed, unsigned workers) {
  if (count == 0) throw DomainError("sample_gff: count must be >= 1");
  const GffSampler sampler(green);
  GaussianSampleBatch batch;
  batch.seed = seed;
  batch.window_hash = green.window_hash;
  batch.covariance_hash = green.hash();
  batch.jitter = sampler.jitter();
  batch.samples.resize(static_cast<Eigen::Index>(count), green.size());
  parallel_for(count, workers, [&](std::size_t i) {
    Rng rng(seed, i);
    batch.samples.row(static_cast<Eigen::Index>(i)) = sampler.sample(rng).transpose();
  });
  return batch;
}

Eigen::MatrixXd shifted_square_field(const Eigen::MatrixXd& phi, double shift) {
  return 0.5 * (phi.array() + shift).square().matrix();
}

Eigen::MatrixXd shifted_square_field(const GaussianSampleBatch& batch, double shift) {
  return shifted_square_field(batch.samples, shift);
}

}  // namespace ri
