#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace ri {

/// Vertex identity: a small integer tuple (lattice coordinates, tree path, or a
/// single id for edge-list graphs).
using Vertex = std::vector<std::int64_t>;

std::string to_string(const Vertex& v);
/// Parses "1,0,-2". The empty string and "()" give the empty tuple.
Vertex parse_vertex(std::string_view text);

struct WeightedEdge {
  Vertex to;
  double weight;
};

/// A locally finite weighted graph described by its neighbor function.
///
/// Infinite graphs exist only through this interface. Transience is whatever the
/// caller declares; it is never checked.
class GraphGenerator {
 public:
  virtual ~GraphGenerator() = default;

  virtual std::vector<WeightedEdge> neighbors(const Vertex& x) const = 0;
  virtual Vertex origin() const = 0;
  virtual std::string name() const = 0;
  virtual bool declared_transient() const = 0;

  /// Resolves "origin"/"root" to origin(), otherwise parses a tuple.
  Vertex resolve(std::string_view text) const;
};

/// Z^d with unit weights. The walk is transient only for d >= 3.
class LatticeGenerator final : public GraphGenerator {
 public:
  explicit LatticeGenerator(int dimension);

  std::vector<WeightedEdge> neighbors(const Vertex& x) const override;
  Vertex origin() const override { return Vertex(static_cast<std::size_t>(dimension_), 0); }
  std::string name() const override { return "z" + std::to_string(dimension_); }
  bool declared_transient() const override { return dimension_ >= 3; }
  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// Rooted tree where every vertex has `branching` children, unit weights. A vertex
/// is the path of child indices from the root; the root is the empty tuple.
class TreeGenerator final : public GraphGenerator {
 public:
  explicit TreeGenerator(int branching);

  std::vector<WeightedEdge> neighbors(const Vertex& x) const override;
  Vertex origin() const override { return {}; }
  std::string name() const override { return "tree" + std::to_string(branching_); }
  bool declared_transient() const override { return branching_ >= 2; }

 private:
  int branching_;
};

/// Explicit finite graph from an edge list, for testing mechanics. Vertices are
/// 1-tuples holding the integer id used in the list.
class EdgeListGenerator final : public GraphGenerator {
 public:
  struct Edge {
    std::int64_t x;
    std::int64_t y;
    double weight;
  };

  /// Applies the symmetric closure. Self-loops, non-positive weights, and an edge
  /// listed twice with different weights are structural errors.
  explicit EdgeListGenerator(std::span<const Edge> edges, bool declared_transient = false);

  /// Reads lines `x y weight`; blank lines and lines starting with '#' are skipped.
  static EdgeListGenerator parse(std::istream& in, bool declared_transient = false);

  std::vector<WeightedEdge> neighbors(const Vertex& x) const override;
  Vertex origin() const override;
  std::string name() const override { return "edges"; }
  bool declared_transient() const override { return transient_; }

 private:
  std::map<std::int64_t, std::map<std::int64_t, double>> adjacency_;
  bool transient_;
};

/// Builds a generator from a short name: "z<d>", "tree<b>", or "edges:<path>".
std::unique_ptr<GraphGenerator> make_generator(std::string_view text);

struct Neighbor {
  int index;
  double weight;
};

/// A finite connected vertex set U cut out of a graph, with its boundary weights
/// into the unseen complement. Owns the vertex <-> dense index mapping.
class WeightedWindow {
 public:
  /// Validates every invariant: lambda = internal + boundary at each vertex,
  /// symmetric positive internal weights, nonempty, connected.
  WeightedWindow(std::vector<Vertex> vertices, std::vector<std::vector<Neighbor>> adjacency,
                 std::vector<double> boundary_weight, std::vector<double> lambda);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_[i]; }
  std::optional<int> find(const Vertex& v) const;
  /// Throws DomainError when v is outside the window.
  int index_of(const Vertex& v) const;

  const std::vector<Neighbor>& neighbors(std::size_t i) const { return adjacency_[i]; }
  /// c_{x,y} for x, y inside (0 when not adjacent).
  double internal_weight(std::size_t i, std::size_t j) const;
  double boundary_weight(std::size_t i) const { return boundary_[i]; }
  double lambda(std::size_t i) const { return lambda_[i]; }
  const std::vector<double>& boundary_weights() const { return boundary_; }
  const std::vector<double>& lambdas() const { return lambda_; }
  double total_boundary_weight() const;

  /// Content hash of vertices and weights.
  std::uint64_t hash() const { return hash_; }
  nlohmann::json to_json() const;

 private:
  std::vector<Vertex> vertices_;
  std::map<Vertex, int> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> boundary_;
  std::vector<double> lambda_;
  std::uint64_t hash_ = 0;
};

/// Graph-distance ball of the given radius around `center`, by breadth-first search.
WeightedWindow build_window(const GraphGenerator& gen, const Vertex& center, int radius);

/// One transition out of a state; `cumulative` is the running sum of weights in
/// neighbor order, ending at lambda.
struct Transition {
  int target;
  double cumulative;
};

/// The window with its complement collapsed onto a single star state x*.
///
/// States 0..n-1 are the window vertices, state n is the star. Weights to the star
/// are the boundary weights; the star has no self-weight. The continuous-time chain
/// jumps at rate 1 from every state.
class CollapsedChain {
 public:
  explicit CollapsedChain(WeightedWindow window);

  const WeightedWindow& window() const { return window_; }
  std::size_t window_size() const { return window_.size(); }
  std::size_t state_count() const { return window_.size() + 1; }
  int star() const { return static_cast<int>(window_.size()); }

  double weight(std::size_t i, std::size_t j) const;
  double lambda(std::size_t i) const;
  const std::vector<Transition>& transitions(std::size_t i) const { return transitions_[i]; }

  /// Draws the next state from i given a uniform in [0, 1).
  int step(std::size_t i, double uniform) const;

 private:
  WeightedWindow window_;
  double star_lambda_;
  std::vector<std::vector<Transition>> transitions_;
};

/// Throws StructuralError("no escape edges") when the window has zero boundary weight.
CollapsedChain collapse(const WeightedWindow& window);

/// p_{x,y} = c^n_{x,y} / lambda^n_x over all n+1 states; rows sum to 1.
Eigen::MatrixXd transition_matrix(const CollapsedChain& chain);
/// Internal transitions only; row x sums to 1 - boundary(x)/lambda_x.
Eigen::MatrixXd transition_matrix(const WeightedWindow& window);

}  // namespace ri
