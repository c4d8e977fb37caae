#include "ri/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "ri/errors.hpp"
#include "ri/gff.hpp"
#include "ri/hash.hpp"
#include "ri/interlace.hpp"
#include "ri/rng.hpp"

namespace ri {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> column(const MatrixXd& m, int c) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, c);
  return out;
}

std::vector<double> column(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string label(const WeightedWindow& window, int i) { return to_string(window.vertex(static_cast<std::size_t>(i))); }

void require_coords(const WeightedWindow& window, std::span<const int> coords) {
  for (int c : coords) {
    if (c < 0 || static_cast<std::size_t>(c) >= window.size()) throw DomainError("coordinate outside the window");
  }
}

void require_level(double level) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("level u must be finite and >= 0");
}

std::size_t count_ks(const TestReport& report) {
  return static_cast<std::size_t>(
      std::count_if(report.checks.begin(), report.checks.end(), [](const Check& c) { return c.policy == "ks"; }));
}

/// Rewrites KS thresholds so the report's KS battery holds family level alpha.
void apply_bonferroni(TestReport& report, double alpha) {
  const std::size_t family = count_ks(report);
  if (family == 0) return;
  const double threshold = alpha / static_cast<double>(family);
  for (Check& c : report.checks) {
    if (c.policy != "ks") continue;
    c.threshold = threshold;
    c.pass = *c.p_value >= threshold;
  }
  report.context["ks_family_size"] = family;
  report.context["ks_threshold"] = threshold;
}

void stamp(TestReport& report, const char* name, const WeightedWindow& window, const VerifyOptions& options) {
  report.name = name;
  report.seed = options.seed;
  report.parameters["window_hash"] = hex64(window.hash());
  report.parameters["window_size"] = window.size();
  report.parameters["samples"] = options.samples;
  report.parameters["sigmas"] = options.sigmas;
  report.parameters["family_alpha"] = options.family_alpha;
}

nlohmann::json coordinate_labels(const WeightedWindow& window, std::span<const int> coords) {
  nlohmann::json j = nlohmann::json::array();
  for (int c : coords) j.push_back(label(window, c));
  return j;
}

}  // namespace

std::vector<int> default_coordinates(const WeightedWindow& window) {
  std::vector<int> dist(window.size(), -1);
  std::deque<int> queue{0};
  dist[0] = 0;
  int first_neighbor = -1;
  int first_second = -1;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : window.neighbors(static_cast<std::size_t>(x))) {
      auto& d = dist[static_cast<std::size_t>(nb.index)];
      if (d >= 0) continue;
      d = dist[static_cast<std::size_t>(x)] + 1;
      if (d == 1 && first_neighbor < 0) first_neighbor = nb.index;
      if (d == 2 && first_second < 0) first_second = nb.index;
      queue.push_back(nb.index);
    }
  }
  std::vector<int> out{0};
  if (first_neighbor >= 0) out.push_back(first_neighbor);
  if (first_second >= 0) out.push_back(first_second);
  return out;
}

TestReport shifted_isomorphism_test(const WeightedWindow& window, double level, double shift,
                                    std::span<const int> coords, const VerifyOptions& options) {
  require_level(level);
  require_coords(window, coords);
  TestReport report;
  stamp(report, "shifted_isomorphism", window, options);
  report.parameters["u"] = level;
  report.parameters["a"] = shift;
  report.parameters["coords"] = coordinate_labels(window, coords);

  const CollapsedChain chain = collapse(window);
  const GreenMatrix green = green_killed(window);
  const std::size_t n = options.samples;

  const OccupationBatch occupation = sample_occupation(SamplerKind::collapse, chain, level, n,
                                                       derive_seed(options.seed, "occupation"), options.workers);
  const GaussianSampleBatch phi_left = sample_gff(green, n, derive_seed(options.seed, "gff-left"), options.workers);
  const GaussianSampleBatch phi_right = sample_gff(green, n, derive_seed(options.seed, "gff-right"), options.workers);

  const MatrixXd left = occupation.values + shifted_square_field(phi_left, shift);
  const MatrixXd right = shifted_square_field(phi_right, std::sqrt(2.0 * level + shift * shift));
  report.context["gff_jitter"] = std::max(phi_left.jitter, phi_right.jitter);

  const double a2 = 2.0 * level + shift * shift;
  for (int x : coords) {
    const std::string lx = label(window, x);
    const auto lcol = column(left, x);
    const auto rcol = column(right, x);
    const KsResult ks = two_sample_ks(lcol, rcol);
    report.add_ks("ks " + lx, ks.statistic, ks.p_value, options.family_alpha);

    const double mean_oracle = 0.5 * (a2 + green(x, x));
    const Estimate ml = mean_estimate(lcol);
    const Estimate mr = mean_estimate(rcol);
    report.add_sigma("mean left " + lx, ml.value, mean_oracle, ml.standard_error, options.sigmas);
    report.add_sigma("mean right " + lx, mr.value, mean_oracle, mr.standard_error, options.sigmas);
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i; j < coords.size(); ++j) {
      const int x = coords[i];
      const int y = coords[j];
      const std::string lxy = label(window, x) + "," + label(window, y);
      const double g = green(x, y);
      // Isserlis: Cov(0.5 (phi_x + c)^2, 0.5 (phi_y + c)^2) = g^2 / 2 + c^2 g.
      const double cov_oracle = 0.5 * g * g + a2 * g;
      const Estimate cl = covariance_estimate(column(left, x), column(left, y));
      const Estimate cr = covariance_estimate(column(right, x), column(right, y));
      report.add_sigma("cov left " + lxy, cl.value, cov_oracle, cl.standard_error, options.sigmas);
      report.add_sigma("cov right " + lxy, cr.value, cov_oracle, cr.standard_error, options.sigmas);
    }
  }
  apply_bonferroni(report, options.family_alpha);
  return report;
}

TestReport isomorphism_test(const WeightedWindow& window, double level, std::span<const int> coords,
                            const VerifyOptions& options) {
  TestReport report = shifted_isomorphism_test(window, level, 0.0, coords, options);
  report.name = "isomorphism";
  report.parameters.erase("a");
  return report;
}

TestReport laplace_test(const WeightedWindow& window, double level, std::span<const double> potential,
                        const VerifyOptions& options, const GraphGenerator* gen, std::span<const int> radii,
                        double tol) {
  require_level(level);
  TestReport report;
  stamp(report, "laplace", window, options);
  report.parameters["u"] = level;
  nlohmann::json vj = nlohmann::json::object();
  for (int s : support_of(potential)) vj[label(window, s)] = potential[static_cast<std::size_t>(s)];
  report.parameters["V"] = vj;

  const std::vector<int> k = support_of(potential);
  const double exact = laplace_exact_finite(window, potential, k, level);
  const double via_resolvent = std::exp(-level * laplace_exponent_killed(window, potential));
  report.context["exact_finite"] = exact;
  report.add_exact("equilibrium/Feynman-Kac vs resolvent form", exact, via_resolvent, 1e-10);

  const CollapsedChain chain = collapse(window);
  EquilibriumMeasure measure;
  if (k.empty()) {
    measure.mass.assign(window.size(), 0.0);
  } else {
    measure = equilibrium(window, k);
  }
  const std::size_t n = options.samples;
  const Eigen::Map<const VectorXd> v(potential.data(), static_cast<Index>(potential.size()));
  for (SamplerKind kind : {SamplerKind::collapse, SamplerKind::excursion_soup, SamplerKind::hitting_soup}) {
    const OccupationBatch batch = sample_occupation(kind, chain, level, n,
                                                    derive_seed(options.seed, "laplace-" + to_string(kind)),
                                                    options.workers, &measure);
    const VectorXd transform = (-(batch.values * v)).array().exp();
    const Estimate est = mean_estimate(column(transform));
    report.add_sigma("E[exp(-<V,L>)] " + to_string(kind), est.value, exact, est.standard_error, options.sigmas);
  }

  if (gen) {
    VertexFunction vf;
    for (int s : k) vf.emplace_back(window.vertex(static_cast<std::size_t>(s)), potential[static_cast<std::size_t>(s)]);
    try {
      const LaplaceLimit limit = laplace_exact_limit(*gen, vf, level, radii, tol);
      report.context["exact_limit"] = limit.value;
      report.context["exact_limit_radius"] = limit.radius;
    } catch (const std::exception& e) {
      report.context["exact_limit_error"] = e.what();
    }
  }
  return report;
}

TestReport vacant_test(const WeightedWindow& window, std::span<const int> k_set, double level,
                       const VerifyOptions& options) {
  require_level(level);
  require_coords(window, k_set);
  TestReport report;
  stamp(report, "vacant", window, options);
  report.parameters["u"] = level;
  report.parameters["K"] = coordinate_labels(window, k_set);

  double capacity = 0.0;
  if (!k_set.empty()) capacity = equilibrium(window, k_set).capacity;
  const double oracle = std::exp(-level * capacity);
  report.context["capacity"] = capacity;
  report.context["exact_vacancy"] = oracle;

  const CollapsedChain chain = collapse(window);
  const std::size_t n = options.samples;
  const OccupationBatch batch = sample_occupation(SamplerKind::collapse, chain, level, n,
                                                  derive_seed(options.seed, "vacant"), options.workers);
  std::size_t vacant = 0;
  for (Index i = 0; i < batch.values.rows(); ++i) {
    bool hit = false;
    for (int x : k_set) hit = hit || batch.values(i, x) > 0.0;
    if (!hit) ++vacant;
  }
  const double p = static_cast<double>(vacant) / static_cast<double>(n);
  const double se = std::sqrt(oracle * (1.0 - oracle) / static_cast<double>(n));
  report.add_sigma("P[trace misses K]", p, oracle, se, options.sigmas);
  return report;
}

TestReport moment_test(const WeightedWindow& window, double level, std::span<const int> coords,
                       const VerifyOptions& options) {
  require_level(level);
  require_coords(window, coords);
  TestReport report;
  stamp(report, "moments", window, options);
  report.parameters["u"] = level;
  report.parameters["coords"] = coordinate_labels(window, coords);

  const CollapsedChain chain = collapse(window);
  const GreenMatrix green = green_killed(window);
  const OccupationBatch batch = sample_occupation(SamplerKind::collapse, chain, level, options.samples,
                                                  derive_seed(options.seed, "moments"), options.workers);
  for (int x : coords) {
    const Estimate m = mean_estimate(column(batch.values, x));
    report.add_sigma("mean " + label(window, x), m.value, level, m.standard_error, options.sigmas);
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i; j < coords.size(); ++j) {
      const int x = coords[i];
      const int y = coords[j];
      const Estimate c = covariance_estimate(column(batch.values, x), column(batch.values, y));
      report.add_sigma("cov " + label(window, x) + "," + label(window, y), c.value, 2.0 * level * green(x, y),
                       c.standard_error, options.sigmas);
    }
  }
  return report;
}

TestReport crossval_test(const WeightedWindow& window, double level, std::span<const int> coords,
                         std::span<const int> k_set, const VerifyOptions& options) {
  require_level(level);
  require_coords(window, coords);
  require_coords(window, k_set);
  TestReport report;
  stamp(report, "crossval", window, options);
  report.parameters["u"] = level;
  report.parameters["coords"] = coords.size();
  report.parameters["K"] = coordinate_labels(window, k_set);

  const CollapsedChain chain = collapse(window);
  const std::size_t n = options.samples;
  const OccupationBatch collapsed = sample_occupation(SamplerKind::collapse, chain, level, n,
                                                      derive_seed(options.seed, "crossval-collapse"), options.workers);
  const OccupationBatch soup = sample_occupation(SamplerKind::excursion_soup, chain, level, n,
                                                 derive_seed(options.seed, "crossval-excursion"), options.workers);
  for (int x : coords) {
    const auto a = column(collapsed.values, x);
    const auto b = column(soup.values, x);
    const KsResult ks = two_sample_ks(a, b);
    report.add_ks("ks collapse/excursion " + label(window, x), ks.statistic, ks.p_value, options.family_alpha);
  }
  for (int x : default_coordinates(window)) {
    const Estimate ma = mean_estimate(column(collapsed.values, x));
    const Estimate mb = mean_estimate(column(soup.values, x));
    report.add_sigma("mean difference collapse-excursion " + label(window, x), ma.value - mb.value, 0.0,
                     std::hypot(ma.standard_error, mb.standard_error), options.sigmas);
  }

  const double star_lambda = chain.lambda(static_cast<std::size_t>(chain.star()));
  {
    std::vector<double> counts(soup.excursions.begin(), soup.excursions.end());
    const Estimate m = mean_estimate(counts);
    const double se = std::sqrt(level * star_lambda / static_cast<double>(n));
    report.add_sigma("excursion count mean", m.value, level * star_lambda, se, options.sigmas);
  }

  if (!k_set.empty()) {
    const EquilibriumMeasure measure = equilibrium(window, k_set);
    const OccupationBatch hitting = sample_occupation(SamplerKind::hitting_soup, chain, level, n,
                                                      derive_seed(options.seed, "crossval-hitting"), options.workers,
                                                      &measure);
    for (int x : measure.support) {
      const KsResult ks = two_sample_ks(column(hitting.values, x), column(collapsed.values, x));
      report.add_ks("ks hitting/collapse " + label(window, x), ks.statistic, ks.p_value, options.family_alpha);
    }
    std::vector<double> counts(hitting.excursions.begin(), hitting.excursions.end());
    const Estimate m = mean_estimate(counts);
    const double se = std::sqrt(level * measure.capacity / static_cast<double>(n));
    report.add_sigma("hitting trajectory count mean", m.value, level * measure.capacity, se, options.sigmas);
    report.context["capacity"] = measure.capacity;
  }
  report.context["star_lambda"] = star_lambda;
  apply_bonferroni(report, options.family_alpha);
  return report;
}

TestReport asymptotics_test(const WeightedWindow& window, std::span<const double> levels, std::span<const int> coords,
                            int base, const VerifyOptions& options) {
  require_coords(window, coords);
  const int bases[] = {base};
  require_coords(window, bases);
  if (levels.empty()) throw DomainError("asymptotics_test: empty level schedule");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0)) throw DomainError("asymptotics_test: levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw DomainError("asymptotics_test: levels must increase strictly");
  }
  TestReport report;
  stamp(report, "asymptotics", window, options);
  report.parameters["levels"] = std::vector<double>(levels.begin(), levels.end());
  report.parameters["coords"] = coordinate_labels(window, coords);
  report.parameters["base"] = label(window, base);

  const CollapsedChain chain = collapse(window);
  const GreenMatrix green = green_killed(window);
  const std::size_t n = options.samples;

  std::vector<std::vector<double>> variances(coords.size());
  OccupationBatch last;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double u = levels[li];
    OccupationBatch batch = sample_occupation(SamplerKind::collapse, chain, u, n,
                                              derive_seed(options.seed, "asymptotics-" + std::to_string(li)),
                                              options.workers);
    const std::string lu = "u=" + nlohmann::json(u).dump();
    for (std::size_t c = 0; c < coords.size(); ++c) {
      const int x = coords[c];
      std::vector<double> scaled = column(batch.values, x);
      for (double& s : scaled) s /= u;
      const Estimate m = mean_estimate(scaled);
      report.add_sigma("mean L/u " + label(window, x) + " " + lu, m.value, 1.0, m.standard_error, options.sigmas);
      // Var(L_x) = 2 u g(x,x), so Var(L_x / u) = 2 g(x,x) / u.
      const Estimate var = variance_estimate(scaled);
      report.add_sigma("var L/u " + label(window, x) + " " + lu, var.value, 2.0 * green(x, x) / u,
                       var.standard_error, options.sigmas);
      variances[c].push_back(var.value);
    }
    if (li + 1 == levels.size()) last = std::move(batch);
  }
  for (std::size_t c = 0; c < coords.size(); ++c) {
    const bool decreasing = std::is_sorted(variances[c].rbegin(), variances[c].rend());
    report.add_exact("var L/u decreasing along schedule " + label(window, coords[c]), decreasing ? 1.0 : 0.0, 1.0, 0.0);
  }

  const double u = levels.back();
  const double scale = std::sqrt(2.0 * u);
  const GaussianSampleBatch phi = sample_gff(green, n, derive_seed(options.seed, "asymptotics-gff"), options.workers);
  for (int x : coords) {
    std::vector<double> standardized = column(last.values, x);
    for (double& s : standardized) s = (s - u) / scale;
    const KsResult ks = two_sample_ks(standardized, column(phi.samples, x));
    report.add_ks("ks (L-u)/sqrt(2u) vs phi " + label(window, x), ks.statistic, ks.p_value, options.family_alpha);
  }
  for (int x : coords) {
    if (x == base) continue;
    std::vector<double> pinned(n), reference(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Index>(i);
      pinned[i] = (last.values(r, x) - last.values(r, base)) / scale;
      reference[i] = phi.samples(r, x) - phi.samples(r, base);
    }
    const KsResult ks = two_sample_ks(pinned, reference);
    report.add_ks("ks pinned " + label(window, x) + "-" + label(window, base), ks.statistic, ks.p_value,
                  options.family_alpha);
  }
  apply_bonferroni(report, options.family_alpha);
  return report;
}

TestReport exact_identity_test(const WeightedWindow& window, std::size_t pairs, std::uint64_t seed) {
  TestReport report;
  report.name = "exact_identities";
  report.seed = seed;
  report.parameters["window_hash"] = hex64(window.hash());
  report.parameters["window_size"] = window.size();
  report.parameters["pairs"] = pairs;

  const GreenMatrix green = green_killed(window);
  const double norm = green.values.cwiseAbs().maxCoeff();
  report.add_exact("green asymmetry before symmetrization", green.asymmetry, 0.0,
                   kGreenAsymmetryTolerance * std::max(1.0, norm));
  const double floor = -1e-8 * norm;
  const double min_eig = green.min_eigenvalue();
  Check& psd = report.add_exact("green min eigenvalue >= -1e-8 |g|", min_eig, floor, 0.0);
  psd.pass = min_eig >= floor;
  Check& nonneg = report.add_exact("green min entry >= 0", green.values.minCoeff(), 0.0, 0.0);
  nonneg.pass = green.values.minCoeff() >= 0.0;

  Rng rng(derive_seed(seed, "exact-pairs"), 0);
  const auto n = static_cast<std::uint64_t>(window.size());
  double worst = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t k_size = 1 + static_cast<std::size_t>(rng.next_u64() % std::min<std::uint64_t>(3, n));
    std::vector<int> k;
    for (std::size_t i = 0; i < k_size; ++i) k.push_back(static_cast<int>(rng.next_u64() % n));
    const auto x = static_cast<std::size_t>(rng.next_u64() % n);
    const HittingRoutes routes = hitting_routes(window, k);
    worst = std::max(worst, std::fabs(routes.direct[x] - routes.via_green[x]));
    worst = std::max(worst, routes.max_difference());
  }
  report.add_exact("hitting identity max |direct - G e|", worst, 0.0, kHittingIdentityTolerance);
  return report;
}

}  // namespace ri
