#include "ri/potential.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "ri/errors.hpp"
#include "ri/hash.hpp"

namespace ri {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

void require_escape(const WeightedWindow& window) {
  if (!(window.total_boundary_weight() > 0.0)) {
    throw StructuralError("singular system: window has no escape edges");
  }
}

/// I - P_U over the whole window.
MatrixXd killed_generator(const WeightedWindow& window) {
  MatrixXd a = -transition_matrix(window);
  a.diagonal().array() += 1.0;
  return a;
}

std::vector<int> validated_set(const WeightedWindow& window, std::span<const int> k_set, const char* what) {
  std::set<int> unique;
  for (int k : k_set) {
    if (k < 0 || static_cast<std::size_t>(k) >= window.size()) {
      throw DomainError(std::string(what) + ": vertex index " + std::to_string(k) + " outside the window");
    }
    unique.insert(k);
  }
  return {unique.begin(), unique.end()};
}

void require_nonnegative(std::span<const double> potential, std::size_t n) {
  if (potential.size() != n) throw DomainError("potential has wrong length");
  for (double v : potential) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("potential must be finite and nonnegative");
  }
}

/// Solves (I - P_RR) q = rhs on the complement R of `k_mask`.
VectorXd solve_off_set(const WeightedWindow& window, const std::vector<char>& k_mask,
                       const std::vector<int>& rest, const VectorXd& rhs) {
  std::vector<int> pos(window.size(), -1);
  for (std::size_t r = 0; r < rest.size(); ++r) pos[static_cast<std::size_t>(rest[r])] = static_cast<int>(r);
  const Index m = ix(rest.size());
  MatrixXd a = MatrixXd::Identity(m, m);
  for (std::size_t r = 0; r < rest.size(); ++r) {
    const auto x = static_cast<std::size_t>(rest[r]);
    for (const Neighbor& nb : window.neighbors(x)) {
      if (!k_mask[static_cast<std::size_t>(nb.index)]) {
        a(ix(r), pos[static_cast<std::size_t>(nb.index)]) -= nb.weight / window.lambda(x);
      }
    }
  }
  return a.partialPivLu().solve(rhs);
}

}  // namespace

double GreenMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(values, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::uint64_t GreenMatrix::hash() const {
  Fnv1a h;
  h.add(values.rows());
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index i = 0; i < values.rows(); ++i) h.add(values(i, j));
  }
  return h.value();
}

GreenMatrix green_killed(const WeightedWindow& window) {
  require_escape(window);
  const Index n = ix(window.size());
  MatrixXd visits = killed_generator(window).partialPivLu().solve(MatrixXd::Identity(n, n));
  if (!visits.allFinite()) throw StructuralError("singular system in green_killed");
  for (Index j = 0; j < n; ++j) visits.col(j) /= window.lambda(static_cast<std::size_t>(j));

  GreenMatrix g;
  g.window_hash = window.hash();
  g.asymmetry = (visits - visits.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, visits.cwiseAbs().maxCoeff());
  if (g.asymmetry > kGreenAsymmetryTolerance * scale) {
    throw ConsistencyError("green_killed: asymmetry " + std::to_string(g.asymmetry) + " exceeds tolerance");
  }
  g.values = 0.5 * (visits + visits.transpose());
  return g;
}

MatrixXd green_columns(const WeightedWindow& window, std::span<const int> columns) {
  require_escape(window);
  const Index n = ix(window.size());
  MatrixXd rhs = MatrixXd::Zero(n, ix(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] < 0 || columns[k] >= n) throw DomainError("green_columns: index outside the window");
    rhs(columns[k], ix(k)) = 1.0;
  }
  MatrixXd out = killed_generator(window).partialPivLu().solve(rhs);
  for (std::size_t k = 0; k < columns.size(); ++k) out.col(ix(k)) /= window.lambda(static_cast<std::size_t>(columns[k]));
  return out;
}

GreenMatrix green_collapsed(const GreenMatrix& killed, double rate) {
  if (!(rate > 0.0)) throw DomainError("resolvent rate must be positive");
  const Index n = killed.size();
  GreenMatrix g;
  g.kind = GreenKind::collapsed_resolvent;
  g.window_hash = killed.window_hash;
  g.asymmetry = killed.asymmetry;
  g.values = MatrixXd::Constant(n + 1, n + 1, 1.0 / rate);
  g.values.topLeftCorner(n, n) += killed.values;
  return g;
}

WindowLimit green_limit(const GraphGenerator& gen, const Vertex& x, const Vertex& y, std::span<const int> radii,
                        double tol) {
  if (radii.empty()) throw DomainError("green_limit: empty radius schedule");
  WindowLimit out;
  for (std::size_t r = 0; r < radii.size(); ++r) {
    if (r > 0 && radii[r] <= radii[r - 1]) throw DomainError("green_limit: radii must increase strictly");
    const WeightedWindow window = build_window(gen, gen.origin(), radii[r]);
    const int xi = window.index_of(x);
    const int yi = window.index_of(y);
    const int cols[] = {yi};
    const double value = green_columns(window, cols)(xi, 0);
    out.iterates.push_back(value);
    out.value = value;
    out.radius = radii[r];
    if (r > 0 && std::fabs(value - out.iterates[r - 1]) < tol) return out;
  }
  const double prev = out.iterates.size() > 1 ? out.iterates[out.iterates.size() - 2] : out.value;
  throw ConvergenceError("green_limit: radius schedule exhausted before tolerance", prev, out.value);
}

EquilibriumMeasure equilibrium(const WeightedWindow& window, std::span<const int> k_set) {
  const std::vector<int> k = validated_set(window, k_set, "equilibrium");
  if (k.empty()) throw DomainError("equilibrium: K is empty");

  std::vector<char> mask(window.size(), 0);
  for (int x : k) mask[static_cast<std::size_t>(x)] = 1;
  std::vector<int> rest;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!mask[i]) rest.push_back(static_cast<int>(i));
  }

  // escape(y) = P_y[exit before hitting K] for y outside K.
  std::vector<double> escape(window.size(), 0.0);
  if (!rest.empty()) {
    VectorXd rhs(ix(rest.size()));
    for (std::size_t r = 0; r < rest.size(); ++r) {
      const auto y = static_cast<std::size_t>(rest[r]);
      rhs(ix(r)) = window.boundary_weight(y) / window.lambda(y);
    }
    const VectorXd q = solve_off_set(window, mask, rest, rhs);
    for (std::size_t r = 0; r < rest.size(); ++r) escape[static_cast<std::size_t>(rest[r])] = q(ix(r));
  }

  EquilibriumMeasure e;
  e.support = k;
  e.mass.assign(window.size(), 0.0);
  for (int xi : k) {
    const auto x = static_cast<std::size_t>(xi);
    double m = window.boundary_weight(x);
    for (const Neighbor& nb : window.neighbors(x)) m += nb.weight * escape[static_cast<std::size_t>(nb.index)];
    e.mass[x] = m;
    e.capacity += m;
  }
  return e;
}

double HittingRoutes::max_difference() const {
  double d = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) d = std::max(d, std::fabs(direct[i] - via_green[i]));
  return d;
}

HittingRoutes hitting_routes(const WeightedWindow& window, std::span<const int> k_set) {
  const std::vector<int> k = validated_set(window, k_set, "hitting_probability");
  HittingRoutes out;
  out.direct.assign(window.size(), 0.0);
  out.via_green.assign(window.size(), 0.0);
  if (k.empty()) return out;

  std::vector<char> mask(window.size(), 0);
  for (int x : k) mask[static_cast<std::size_t>(x)] = 1;
  std::vector<int> rest;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (mask[i]) {
      out.direct[i] = 1.0;
    } else {
      rest.push_back(static_cast<int>(i));
    }
  }
  if (!rest.empty()) {
    VectorXd rhs = VectorXd::Zero(ix(rest.size()));
    for (std::size_t r = 0; r < rest.size(); ++r) {
      const auto x = static_cast<std::size_t>(rest[r]);
      for (const Neighbor& nb : window.neighbors(x)) {
        if (mask[static_cast<std::size_t>(nb.index)]) rhs(ix(r)) += nb.weight / window.lambda(x);
      }
    }
    const VectorXd h = solve_off_set(window, mask, rest, rhs);
    for (std::size_t r = 0; r < rest.size(); ++r) out.direct[static_cast<std::size_t>(rest[r])] = h(ix(r));
  }

  const EquilibriumMeasure e = equilibrium(window, k);
  const MatrixXd g = green_columns(window, k);
  for (std::size_t x = 0; x < window.size(); ++x) {
    for (std::size_t c = 0; c < k.size(); ++c) {
      out.via_green[x] += g(ix(x), ix(c)) * e.mass[static_cast<std::size_t>(k[c])];
    }
  }
  return out;
}

std::vector<double> hitting_profile(const WeightedWindow& window, std::span<const int> k_set) {
  HittingRoutes routes = hitting_routes(window, k_set);
  for (std::size_t x = 0; x < window.size(); ++x) {
    if (std::fabs(routes.via_green[x] - routes.direct[x]) > kHittingIdentityTolerance) {
      throw ConsistencyError("hitting identity violated at " + to_string(window.vertex(x)) + ": direct " +
                             std::to_string(routes.direct[x]) + " vs green " + std::to_string(routes.via_green[x]));
    }
  }
  return std::move(routes.direct);
}

double hitting_probability(const WeightedWindow& window, int x, std::span<const int> k_set) {
  if (x < 0 || static_cast<std::size_t>(x) >= window.size()) throw DomainError("hitting_probability: x outside window");
  return hitting_profile(window, k_set)[static_cast<std::size_t>(x)];
}

PotentialFunction feynman_kac(const WeightedWindow& window, std::span<const double> potential) {
  require_nonnegative(potential, window.size());
  require_escape(window);
  const Index n = ix(window.size());
  MatrixXd a = killed_generator(window);
  VectorXd exit_mass(n);
  for (Index i = 0; i < n; ++i) {
    const auto x = static_cast<std::size_t>(i);
    a(i, i) += potential[x] / window.lambda(x);
    exit_mass(i) = window.boundary_weight(x) / window.lambda(x);
  }
  const VectorXd u = a.partialPivLu().solve(exit_mass);
  PotentialFunction out;
  out.op = PotentialOperator::feynman_kac;
  out.values.assign(u.data(), u.data() + u.size());
  return out;
}

std::vector<int> support_of(std::span<const double> potential) {
  std::vector<int> s;
  for (std::size_t i = 0; i < potential.size(); ++i) {
    if (potential[i] != 0.0) s.push_back(static_cast<int>(i));
  }
  return s;
}

double laplace_exact_finite(const WeightedWindow& window, std::span<const double> potential,
                            std::span<const int> k_set, double level) {
  if (!(level >= 0.0)) throw DomainError("level u must be >= 0");
  require_nonnegative(potential, window.size());
  const std::vector<int> k = validated_set(window, k_set, "laplace_exact_finite");
  std::vector<char> mask(window.size(), 0);
  for (int x : k) mask[static_cast<std::size_t>(x)] = 1;
  for (int s : support_of(potential)) {
    if (!mask[static_cast<std::size_t>(s)]) throw DomainError("laplace_exact_finite: support(V) not inside K");
  }
  if (k.empty() || level == 0.0) return 1.0;

  const EquilibriumMeasure e = equilibrium(window, k);
  const PotentialFunction fk = feynman_kac(window, potential);
  double exponent = 0.0;
  for (int x : k) exponent += e.mass[static_cast<std::size_t>(x)] * (fk.values[static_cast<std::size_t>(x)] - 1.0);
  return std::exp(level * exponent);
}

double laplace_exact_finite(const WeightedWindow& window, std::span<const double> potential, double level) {
  require_nonnegative(potential, window.size());
  const std::vector<int> k = support_of(potential);
  return laplace_exact_finite(window, potential, k, level);
}

double laplace_exponent(const MatrixXd& green_on_support, std::span<const double> potential_on_support) {
  const Index m = green_on_support.rows();
  if (green_on_support.cols() != m || ix(potential_on_support.size()) != m) {
    throw DomainError("laplace_exponent: size mismatch");
  }
  if (m == 0) return 0.0;
  const Eigen::Map<const VectorXd> v(potential_on_support.data(), m);
  const MatrixXd a = MatrixXd::Identity(m, m) + green_on_support * v.asDiagonal();
  const VectorXd h = a.partialPivLu().solve(VectorXd::Ones(m));
  return v.dot(h);
}

namespace {

struct SupportKernel {
  double exponent = 0.0;
  double sup_gv = 0.0;
};

/// One solve for the columns of g_U on supp(V), shared by the exponent and sup G V.
SupportKernel support_kernel(const WeightedWindow& window, std::span<const double> potential) {
  require_nonnegative(potential, window.size());
  const std::vector<int> s = support_of(potential);
  if (s.empty()) return {};
  const MatrixXd cols = green_columns(window, s);
  MatrixXd g(ix(s.size()), ix(s.size()));
  std::vector<double> v(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    v[a] = potential[static_cast<std::size_t>(s[a])];
    for (std::size_t b = 0; b < s.size(); ++b) g(ix(a), ix(b)) = cols(s[a], ix(b));
  }
  const Eigen::Map<const VectorXd> vv(v.data(), ix(v.size()));
  return {laplace_exponent(0.5 * (g + g.transpose()), v), (cols * vv).maxCoeff()};
}

}  // namespace

double laplace_exponent_killed(const WeightedWindow& window, std::span<const double> potential) {
  return support_kernel(window, potential).exponent;
}

double sup_green_potential(const WeightedWindow& window, std::span<const double> potential) {
  return support_kernel(window, potential).sup_gv;
}

std::vector<double> potential_on(const WeightedWindow& window, const VertexFunction& potential) {
  std::vector<double> v(window.size(), 0.0);
  for (const auto& [vertex, value] : potential) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw DomainError("potential at " + to_string(vertex) + " must be finite and nonnegative");
    }
    v[static_cast<std::size_t>(window.index_of(vertex))] += value;
  }
  return v;
}

LaplaceLimit laplace_exact_limit(const GraphGenerator& gen, const VertexFunction& potential, double level,
                                 std::span<const int> radii, double tol) {
  if (!(level >= 0.0)) throw DomainError("level u must be >= 0");
  if (radii.empty()) throw DomainError("laplace_exact_limit: empty radius schedule");
  LaplaceLimit out;
  bool converged = false;
  for (std::size_t r = 0; r < radii.size(); ++r) {
    if (r > 0 && radii[r] <= radii[r - 1]) throw DomainError("laplace_exact_limit: radii must increase strictly");
    const WeightedWindow window = build_window(gen, gen.origin(), radii[r]);
    const std::vector<double> v = potential_on(window, potential);
    const SupportKernel kernel = support_kernel(window, v);
    out.exponent = kernel.exponent;
    out.sup_gv = kernel.sup_gv;
    out.iterates.push_back(out.exponent);
    out.radius = radii[r];
    if (r > 0 && std::fabs(out.exponent - out.iterates[r - 1]) < tol) {
      converged = true;
      break;
    }
  }
  if (!(out.sup_gv < 1.0)) {
    throw PreconditionError("Laplace condition violated: sup G V = " + std::to_string(out.sup_gv) + " >= 1");
  }
  if (!converged) {
    const double prev = out.iterates.size() > 1 ? out.iterates[out.iterates.size() - 2] : out.exponent;
    throw ConvergenceError("laplace_exact_limit: radius schedule exhausted before tolerance", prev, out.exponent);
  }
  out.value = std::exp(-level * out.exponent);
  return out;
}

ResolventIdentity resolvent_identity(const WeightedWindow& window, std::span<const double> potential, double rate) {
  if (!(rate > 0.0)) throw DomainError("resolvent rate must be positive");
  require_nonnegative(potential, window.size());

  ResolventIdentity out;
  double mass = 0.0;
  for (double v : potential) mass += v;
  out.smallness = sup_green_potential(window, potential) + mass / rate;
  if (!(out.smallness < 1.0)) {
    throw PreconditionError("smallness condition violated: sup G V + sum V / rate = " +
                            std::to_string(out.smallness) + " >= 1");
  }

  // Route 1: (I + G_n V)^{-1} 1 over window + star, V(star) = 0.
  const GreenMatrix gn = green_collapsed(green_killed(window), rate);
  const Index m = gn.size();
  VectorXd v_ext = VectorXd::Zero(m);
  for (std::size_t i = 0; i < potential.size(); ++i) v_ext(ix(i)) = potential[i];
  const MatrixXd a = MatrixXd::Identity(m, m) + gn.values * v_ext.asDiagonal();
  const VectorXd h = a.partialPivLu().solve(VectorXd::Ones(m));
  out.direct = h(m - 1);
  out.b = v_ext.dot(h);
  out.one_minus_b_over_rate = 1.0 - out.b / rate;

  // Route 2: reduction to the killed kernel on supp(V).
  out.reduced = 1.0 / (1.0 + laplace_exponent_killed(window, potential) / rate);
  return out;
}

TestReport resolvent_check(const WeightedWindow& window, std::span<const double> potential, double rate) {
  TestReport report;
  report.name = "resolvent_check";
  report.parameters = {{"rate", rate}, {"window_hash", hex64(window.hash())}};
  const ResolventIdentity r = resolvent_identity(window, potential, rate);
  report.context = {{"smallness", r.smallness}, {"b", r.b}};
  report.add_exact("star value: direct vs reduced", r.direct, r.reduced, kResolventTolerance);
  report.add_exact("star value: direct vs 1 - b/rate", r.direct, r.one_minus_b_over_rate, kResolventTolerance);
  return report;
}

}  // namespace ri
