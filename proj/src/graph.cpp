#include "ri/graph.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "ri/errors.hpp"
#include "ri/hash.hpp"

namespace ri {

namespace {

constexpr double kWeightRelTol = 1e-12;

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kWeightRelTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t window_hash(const std::vector<Vertex>& vertices_, const std::vector<std::vector<Neighbor>>& adjacency_,
                          const std::vector<double>& boundary_, const std::vector<double>& lambda_);

}  // namespace

std::string to_string(const Vertex& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out + ")";
}

Vertex parse_vertex(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw DomainError("malformed vertex '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
  }
  Vertex v;
  if (text.empty()) return v;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view part = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || end != part.data() + part.size()) {
      throw DomainError("malformed vertex '" + std::string(text) + "'");
    }
    v.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return v;
}

Vertex GraphGenerator::resolve(std::string_view text) const {
  const std::string_view t = trim(text);
  if (t == "origin" || t == "root") return origin();
  return parse_vertex(t);
}

// ---------------------------------------------------------------------------

LatticeGenerator::LatticeGenerator(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw DomainError("lattice dimension must be >= 1");
}

std::vector<WeightedEdge> LatticeGenerator::neighbors(const Vertex& x) const {
  if (x.size() != static_cast<std::size_t>(dimension_)) {
    throw DomainError("vertex " + to_string(x) + " is not in " + name());
  }
  std::vector<WeightedEdge> out;
  out.reserve(2 * static_cast<std::size_t>(dimension_));
  for (int axis = 0; axis < dimension_; ++axis) {
    for (int sign : {+1, -1}) {
      Vertex y = x;
      y[static_cast<std::size_t>(axis)] += sign;
      out.push_back({std::move(y), 1.0});
    }
  }
  return out;
}

TreeGenerator::TreeGenerator(int branching) : branching_(branching) {
  if (branching < 1) throw DomainError("tree branching must be >= 1");
}

std::vector<WeightedEdge> TreeGenerator::neighbors(const Vertex& x) const {
  for (auto c : x) {
    if (c < 0 || c >= branching_) throw DomainError("vertex " + to_string(x) + " is not in " + name());
  }
  std::vector<WeightedEdge> out;
  if (!x.empty()) out.push_back({Vertex(x.begin(), x.end() - 1), 1.0});
  for (int c = 0; c < branching_; ++c) {
    Vertex y = x;
    y.push_back(c);
    out.push_back({std::move(y), 1.0});
  }
  return out;
}

EdgeListGenerator::EdgeListGenerator(std::span<const Edge> edges, bool declared_transient)
    : transient_(declared_transient) {
  auto insert = [&](std::int64_t a, std::int64_t b, double w) {
    auto [it, inserted] = adjacency_[a].emplace(b, w);
    if (!inserted && !nearly_equal(it->second, w)) {
      throw StructuralError("edge " + std::to_string(a) + "-" + std::to_string(b) +
                            " listed with different weights");
    }
  };
  for (const Edge& e : edges) {
    if (e.x == e.y) throw StructuralError("self-loop at " + std::to_string(e.x));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw StructuralError("non-positive weight on edge " + std::to_string(e.x) + "-" + std::to_string(e.y));
    }
    insert(e.x, e.y, e.weight);
    insert(e.y, e.x, e.weight);
  }
  if (adjacency_.empty()) throw StructuralError("edge list is empty");
}

EdgeListGenerator EdgeListGenerator::parse(std::istream& in, bool declared_transient) {
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    Edge e{};
    if (!(fields >> e.x >> e.y >> e.weight)) {
      throw StructuralError("edge list line " + std::to_string(lineno) + ": expected 'x y weight'");
    }
    std::string extra;
    if (fields >> extra) {
      throw StructuralError("edge list line " + std::to_string(lineno) + ": trailing data");
    }
    edges.push_back(e);
  }
  return EdgeListGenerator(edges, declared_transient);
}

std::vector<WeightedEdge> EdgeListGenerator::neighbors(const Vertex& x) const {
  if (x.size() != 1) throw DomainError("edge-list vertices are 1-tuples, got " + to_string(x));
  std::vector<WeightedEdge> out;
  const auto it = adjacency_.find(x[0]);
  if (it == adjacency_.end()) return out;
  for (const auto& [y, w] : it->second) out.push_back({Vertex{y}, w});
  return out;
}

Vertex EdgeListGenerator::origin() const { return Vertex{adjacency_.begin()->first}; }

std::unique_ptr<GraphGenerator> make_generator(std::string_view text) {
  text = trim(text);
  auto parse_int = [&](std::string_view digits) {
    int value = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size()) {
      throw DomainError("unknown generator '" + std::string(text) + "'");
    }
    return value;
  };
  if (text.starts_with("edges:")) {
    const std::string path(text.substr(6));
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open edge list '" + path + "'");
    return std::make_unique<EdgeListGenerator>(EdgeListGenerator::parse(in));
  }
  if (text.starts_with("tree")) return std::make_unique<TreeGenerator>(parse_int(text.substr(4)));
  if (text.starts_with("z")) return std::make_unique<LatticeGenerator>(parse_int(text.substr(1)));
  throw DomainError("unknown generator '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

WeightedWindow::WeightedWindow(std::vector<Vertex> vertices, std::vector<std::vector<Neighbor>> adjacency,
                               std::vector<double> boundary_weight, std::vector<double> lambda)
    : vertices_(std::move(vertices)),
      adjacency_(std::move(adjacency)),
      boundary_(std::move(boundary_weight)),
      lambda_(std::move(lambda)) {
  const std::size_t n = vertices_.size();
  if (n == 0) throw StructuralError("window is empty");
  if (adjacency_.size() != n || boundary_.size() != n || lambda_.size() != n) {
    throw StructuralError("window field sizes disagree");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(vertices_[i], static_cast<int>(i)).second) {
      throw StructuralError("duplicate vertex " + to_string(vertices_[i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double internal = 0.0;
    for (const Neighbor& nb : adjacency_[i]) {
      if (nb.index < 0 || static_cast<std::size_t>(nb.index) >= n || static_cast<std::size_t>(nb.index) == i) {
        throw StructuralError("bad neighbor index at " + to_string(vertices_[i]));
      }
      if (!(nb.weight > 0.0)) throw StructuralError("non-positive weight at " + to_string(vertices_[i]));
      if (!nearly_equal(internal_weight(static_cast<std::size_t>(nb.index), i), nb.weight)) {
        throw StructuralError("asymmetric weight between " + to_string(vertices_[i]) + " and " +
                              to_string(vertices_[static_cast<std::size_t>(nb.index)]));
      }
      internal += nb.weight;
    }
    if (boundary_[i] < 0.0) throw StructuralError("negative boundary weight at " + to_string(vertices_[i]));
    if (!nearly_equal(internal + boundary_[i], lambda_[i])) {
      throw StructuralError("lambda != internal + boundary at " + to_string(vertices_[i]));
    }
    if (!(lambda_[i] > 0.0)) throw StructuralError("isolated vertex " + to_string(vertices_[i]));
  }
  // Connectivity through internal edges.
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : adjacency_[i]) {
      const auto j = static_cast<std::size_t>(nb.index);
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  if (reached != n) throw StructuralError("window is not connected");
  hash_ = window_hash(vertices_, adjacency_, boundary_, lambda_);
}

std::optional<int> WeightedWindow::find(const Vertex& v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int WeightedWindow::index_of(const Vertex& v) const {
  const auto idx = find(v);
  if (!idx) throw DomainError("vertex " + to_string(v) + " is outside the window");
  return *idx;
}

double WeightedWindow::internal_weight(std::size_t i, std::size_t j) const {
  for (const Neighbor& nb : adjacency_[i]) {
    if (static_cast<std::size_t>(nb.index) == j) return nb.weight;
  }
  return 0.0;
}

double WeightedWindow::total_boundary_weight() const {
  double total = 0.0;
  for (double b : boundary_) total += b;
  return total;
}

namespace {

std::uint64_t window_hash(const std::vector<Vertex>& vertices_, const std::vector<std::vector<Neighbor>>& adjacency_,
                          const std::vector<double>& boundary_, const std::vector<double>& lambda_) {
  Fnv1a h;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    h.add(vertices_[i].size());
    for (auto c : vertices_[i]) h.add(c);
    h.add(boundary_[i]);
    h.add(lambda_[i]);
    for (const Neighbor& nb : adjacency_[i]) {
      h.add(nb.index);
      h.add(nb.weight);
    }
  }
  return h.value();
}

}  // namespace

nlohmann::json WeightedWindow::to_json() const {
  nlohmann::json j;
  j["schema"] = "ri.window/1";
  j["hash"] = hex64(hash());
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    verts.push_back({{"index", i},
                     {"vertex", vertices_[i]},
                     {"lambda", lambda_[i]},
                     {"boundary_weight", boundary_[i]}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Neighbor& nb : adjacency_[i]) {
      if (static_cast<std::size_t>(nb.index) > i) edges.push_back({i, nb.index, nb.weight});
    }
  }
  j["total_boundary_weight"] = total_boundary_weight();
  return j;
}

WeightedWindow build_window(const GraphGenerator& gen, const Vertex& center, int radius) {
  if (radius < 0) throw DomainError("radius must be >= 0");

  std::vector<Vertex> vertices{center};
  std::map<Vertex, int> index{{center, 0}};
  std::vector<std::vector<WeightedEdge>> lists;
  std::deque<std::pair<int, int>> frontier{{0, 0}};  // (index, distance)

  while (!frontier.empty()) {
    const auto [i, dist] = frontier.front();
    frontier.pop_front();
    auto nbrs = gen.neighbors(vertices[static_cast<std::size_t>(i)]);
    if (nbrs.empty()) {
      throw StructuralError("empty neighbor list at " + to_string(vertices[static_cast<std::size_t>(i)]));
    }
    if (lists.size() <= static_cast<std::size_t>(i)) lists.resize(static_cast<std::size_t>(i) + 1);
    if (dist < radius) {
      for (const WeightedEdge& e : nbrs) {
        if (index.emplace(e.to, static_cast<int>(vertices.size())).second) {
          vertices.push_back(e.to);
          frontier.emplace_back(static_cast<int>(vertices.size()) - 1, dist + 1);
        }
      }
    }
    lists[static_cast<std::size_t>(i)] = std::move(nbrs);
  }

  const std::size_t n = vertices.size();
  std::vector<std::vector<Neighbor>> adjacency(n);
  std::vector<double> boundary(n, 0.0);
  std::vector<double> lambda(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const WeightedEdge& e : lists[i]) {
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw StructuralError("non-positive weight at " + to_string(vertices[i]));
      }
      // Symmetry is checked against the neighbor's own list.
      const auto back = gen.neighbors(e.to);
      const auto it = std::find_if(back.begin(), back.end(), [&](const WeightedEdge& b) { return b.to == vertices[i]; });
      if (it == back.end() || !nearly_equal(it->weight, e.weight)) {
        throw StructuralError("non-symmetric weight between " + to_string(vertices[i]) + " and " + to_string(e.to));
      }
      lambda[i] += e.weight;
      const auto j = index.find(e.to);
      if (j == index.end()) {
        boundary[i] += e.weight;
      } else {
        adjacency[i].push_back({j->second, e.weight});
      }
    }
  }
  return WeightedWindow(std::move(vertices), std::move(adjacency), std::move(boundary), std::move(lambda));
}

// ---------------------------------------------------------------------------

CollapsedChain::CollapsedChain(WeightedWindow window) : window_(std::move(window)) {
  star_lambda_ = window_.total_boundary_weight();
  if (!(star_lambda_ > 0.0)) throw StructuralError("no escape edges: window has zero boundary weight");

  const std::size_t n = window_.size();
  transitions_.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double running = 0.0;
    for (const Neighbor& nb : window_.neighbors(i)) {
      running += nb.weight;
      transitions_[i].push_back({nb.index, running});
    }
    if (window_.boundary_weight(i) > 0.0) {
      transitions_[i].push_back({star(), window_.lambda(i)});
    } else if (!transitions_[i].empty()) {
      transitions_[i].back().cumulative = window_.lambda(i);
    }
  }
  double running = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    if (window_.boundary_weight(y) > 0.0) {
      running += window_.boundary_weight(y);
      transitions_[n].push_back({static_cast<int>(y), running});
    }
  }
  transitions_[n].back().cumulative = star_lambda_;
}

double CollapsedChain::weight(std::size_t i, std::size_t j) const {
  const std::size_t s = window_.size();
  if (i == s && j == s) return 0.0;
  if (i == s) return window_.boundary_weight(j);
  if (j == s) return window_.boundary_weight(i);
  return window_.internal_weight(i, j);
}

double CollapsedChain::lambda(std::size_t i) const {
  return i == window_.size() ? star_lambda_ : window_.lambda(i);
}

int CollapsedChain::step(std::size_t i, double uniform) const {
  const auto& row = transitions_[i];
  const double target = uniform * row.back().cumulative;
  for (const Transition& t : row) {
    if (target < t.cumulative) return t.target;
  }
  return row.back().target;
}

CollapsedChain collapse(const WeightedWindow& window) { return CollapsedChain(window); }

Eigen::MatrixXd transition_matrix(const CollapsedChain& chain) {
  const auto m = static_cast<Eigen::Index>(chain.state_count());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  const auto& w = chain.window();
  const auto s = static_cast<Eigen::Index>(chain.star());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (const Neighbor& nb : w.neighbors(i)) p(r, nb.index) = nb.weight / w.lambda(i);
    p(r, s) = w.boundary_weight(i) / w.lambda(i);
    p(s, r) = w.boundary_weight(i) / chain.lambda(chain.star());
  }
  return p;
}

Eigen::MatrixXd transition_matrix(const WeightedWindow& window) {
  const auto n = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (const Neighbor& nb : window.neighbors(i)) {
      p(static_cast<Eigen::Index>(i), nb.index) = nb.weight / window.lambda(i);
    }
  }
  return p;
}

}  // namespace ri
