#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ri/graph.hpp"
#include "ri/report.hpp"

namespace ri {

enum class GreenKind {
  killed,               // g_U: walk killed on exiting the window
  collapsed_resolvent,  // g_n = g_U + 1/rate on window + star, g_U(star, .) = 0
};

/// Dense symmetric Green matrix, in units of time per weight.
struct GreenMatrix {
  Eigen::MatrixXd values;
  GreenKind kind = GreenKind::killed;
  /// max |g - g^T| before symmetrization.
  double asymmetry = 0.0;
  std::uint64_t window_hash = 0;

  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
  Eigen::Index size() const { return values.rows(); }
  /// Smallest eigenvalue (self-adjoint solver).
  double min_eigenvalue() const;
  std::uint64_t hash() const;
};

/// Symmetrized asymmetry bound: solves with a larger residual are rejected.
inline constexpr double kGreenAsymmetryTolerance = 1e-9;
inline constexpr double kHittingIdentityTolerance = 1e-10;
inline constexpr double kResolventTolerance = 1e-9;

/// g_U(x,y) = E_x[time at y before exit] / lambda_y, from (I - P_U) G = I by
/// partial-pivoting LU. Throws StructuralError when the system is singular.
GreenMatrix green_killed(const WeightedWindow& window);

/// g_U restricted to the given columns: result(:, k) = g_U(., columns[k]).
Eigen::MatrixXd green_columns(const WeightedWindow& window, std::span<const int> columns);

/// g_n over window + star (star last) for the given resolvent rate.
GreenMatrix green_collapsed(const GreenMatrix& killed, double rate);

struct WindowLimit {
  double value = 0.0;
  int radius = 0;
  std::vector<double> iterates;
};

/// g_{U_n}(x, y) over windows centred at gen.origin() with the given radii, stopping
/// at the first increment below tol. Throws ConvergenceError when the schedule
/// runs out.
WindowLimit green_limit(const GraphGenerator& gen, const Vertex& x, const Vertex& y,
                        std::span<const int> radii, double tol);

struct EquilibriumMeasure {
  std::vector<int> support;
  std::vector<double> mass;  // indexed by window vertex; zero off the support
  double capacity = 0.0;
};

/// e_{K,U}(x) = P_x[no return to K before exit] * lambda_x on K.
EquilibriumMeasure equilibrium(const WeightedWindow& window, std::span<const int> k_set);

/// P_x[H_K < T_U] for every x by two routes: a direct solve with absorption on K
/// and on exit, and sum_y g_U(x,y) e_{K,U}(y).
struct HittingRoutes {
  std::vector<double> direct;
  std::vector<double> via_green;
  double max_difference() const;
};
HittingRoutes hitting_routes(const WeightedWindow& window, std::span<const int> k_set);

/// P_x[H_K < T_U] for every x, by direct solve. Also evaluates the Green /
/// equilibrium route and throws ConsistencyError when any entry differs by more
/// than kHittingIdentityTolerance.
std::vector<double> hitting_profile(const WeightedWindow& window, std::span<const int> k_set);
double hitting_probability(const WeightedWindow& window, int x, std::span<const int> k_set);

enum class PotentialOperator { green, collapsed_green, killed_green_star, feynman_kac };

struct PotentialFunction {
  std::vector<double> values;
  PotentialOperator op = PotentialOperator::feynman_kac;
};

/// u(x) = E_x[exp(-int_0^{T_U} (V/lambda)(X_s) ds)]; V is indexed by window vertex.
PotentialFunction feynman_kac(const WeightedWindow& window, std::span<const double> potential);

/// exp{u * sum_x e_{K,U}(x) (u_FK(x) - 1)}: the exact Laplace transform of the
/// occupation field sampled on this window. K must contain the support of V.
double laplace_exact_finite(const WeightedWindow& window, std::span<const double> potential,
                            std::span<const int> k_set, double level);
/// Same with K = support(V).
double laplace_exact_finite(const WeightedWindow& window, std::span<const double> potential, double level);

/// <V, (I + G V)^{-1} 1> for a Green kernel given on supp(V) x supp(V).
double laplace_exponent(const Eigen::MatrixXd& green_on_support, std::span<const double> potential_on_support);

/// <V, (I + G_U V)^{-1} 1> on one window (V indexed by window vertex).
double laplace_exponent_killed(const WeightedWindow& window, std::span<const double> potential);

/// sup_x (G_U V)(x) over the window.
double sup_green_potential(const WeightedWindow& window, std::span<const double> potential);

using VertexFunction = std::vector<std::pair<Vertex, double>>;

struct LaplaceLimit {
  double value = 0.0;     // exp(-u * exponent)
  double exponent = 0.0;  // <V, (I + G V)^{-1} 1> on the last window
  double sup_gv = 0.0;    // sup G_U V on the last window
  int radius = 0;
  std::vector<double> iterates;
};

/// exp{-u <V, (I + G V)^{-1} 1>} through the window limit of G_U. Throws
/// PreconditionError when sup G_U V >= 1 on the last window, ConvergenceError when
/// the schedule runs out.
LaplaceLimit laplace_exact_limit(const GraphGenerator& gen, const VertexFunction& potential, double level,
                                 std::span<const int> radii, double tol);

struct ResolventIdentity {
  double direct = 0.0;       // (I + G_n V)^{-1} 1 at the star
  double reduced = 0.0;      // (1 + <V, (I + G_U V)^{-1} 1> / rate)^{-1}
  double b = 0.0;            // sum_x V(x) h_n(x)
  double one_minus_b_over_rate = 0.0;
  double smallness = 0.0;    // sup G_U V + sum V / rate
};

/// Both sides of the collapsed resolvent identity by independent dense solves.
/// Throws PreconditionError when the smallness condition fails.
ResolventIdentity resolvent_identity(const WeightedWindow& window, std::span<const double> potential, double rate);

/// resolvent_identity wrapped as a report; passes when both differences are below
/// kResolventTolerance.
TestReport resolvent_check(const WeightedWindow& window, std::span<const double> potential, double rate);

/// Dense potential vector from (vertex, value) pairs. Negative values and
/// vertices outside the window are DomainErrors.
std::vector<double> potential_on(const WeightedWindow& window, const VertexFunction& potential);

std::vector<int> support_of(std::span<const double> potential);

}  // namespace ri
