#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kg {

using VertexId = std::uint32_t;

/// Undirected edge in canonical orientation (u < v).
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  static Edge make(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    return std::hash<std::uint64_t>{}((std::uint64_t{e.u} << 32) | e.v);
  }
};

/// Plain undirected simple graph over vertex ids. No validity constraints
/// beyond: no self-loops, edge endpoints are vertices. Immutable once built;
/// adjacency lists are sorted, so iteration order is deterministic.
class Subgraph {
 public:
  Subgraph() = default;

  /// Vertices are the union of `vertices` and all edge endpoints.
  static Subgraph build(std::vector<VertexId> vertices, std::vector<Edge> edges);

  std::span<const VertexId> vertices() const { return verts_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const VertexId> neighbors(VertexId v) const;

  bool has_vertex(VertexId v) const;
  bool has_edge(VertexId a, VertexId b) const;
  std::size_t degree(VertexId v) const { return neighbors(v).size(); }
  std::size_t vertex_count() const { return verts_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Copy with one vertex (and its incident edges) removed. Vertices left
  /// isolated by the removal are kept.
  Subgraph without_vertex(VertexId v) const;

 private:
  std::vector<VertexId> verts_;  // sorted unique
  std::vector<Edge> edges_;      // canonical, sorted unique
  std::unordered_map<VertexId, std::vector<VertexId>> adj_;
};

/// The closed world all hypotheses live in: an undirected graph with edge
/// weights in (0,1] plus named label maps on vertices and edges.
/// Single-writer construction; all reads are const and thread-safe.
class UniverseGraph {
 public:
  void add_vertex(VertexId v);
  /// Registers endpoints as vertices. Throws DataError on self-loops or
  /// weights outside (0,1]. Re-adding an edge overwrites its weight.
  void add_edge(VertexId a, VertexId b, double weight);
  /// Sorts adjacency and freezes the graph. Must be called once after the
  /// last mutation; reads before freeze() are invalid.
  void freeze();

  std::span<const VertexId> vertices() const { return topo_.vertices(); }
  std::span<const Edge> edges() const { return topo_.edges(); }
  std::span<const VertexId> neighbors(VertexId v) const { return topo_.neighbors(v); }
  bool has_vertex(VertexId v) const { return topo_.has_vertex(v); }
  bool has_edge(VertexId a, VertexId b) const { return topo_.has_edge(a, b); }
  std::size_t vertex_count() const { return topo_.vertex_count(); }
  std::size_t edge_count() const { return topo_.edge_count(); }
  const Subgraph& topology() const { return topo_; }

  /// Throws DataError for a non-edge.
  double edge_weight(VertexId a, VertexId b) const;

  void set_vertex_label(const std::string& key, VertexId v, const std::string& value);
  void set_edge_label(const std::string& key, Edge e, const std::string& value);
  std::optional<std::string> vertex_label(const std::string& key, VertexId v) const;
  std::optional<std::string> edge_label(const std::string& key, Edge e) const;
  const std::map<std::string, std::map<VertexId, std::string>>& vertex_labels() const {
    return vertex_labels_;
  }

 private:
  bool frozen_ = false;
  std::vector<VertexId> pending_verts_;
  std::vector<std::pair<Edge, double>> pending_edges_;
  Subgraph topo_;
  std::unordered_map<Edge, double, EdgeHash> weights_;
  std::map<std::string, std::map<VertexId, std::string>> vertex_labels_;
  std::map<std::string, std::map<Edge, std::string>> edge_labels_;
};

/// Connected subgraph of a universe with >= 2 vertices and >= 1 edge.
/// Validity is established at construction and never mutated afterwards.
class Hypothesis {
 public:
  /// Validates: every edge exists in U, endpoints lie in `vertices`,
  /// |V| >= 2, |E| >= 1, connected. Throws DataError otherwise.
  static Hypothesis create(const UniverseGraph& universe, std::vector<VertexId> vertices,
                           std::vector<Edge> edges);

  /// Same checks but against a plain topology (used where the universe is
  /// itself a derived graph, e.g. a population union).
  static Hypothesis create_in(const Subgraph& universe, std::vector<VertexId> vertices,
                              std::vector<Edge> edges);

  const Subgraph& graph() const { return g_; }
  std::span<const VertexId> vertices() const { return g_.vertices(); }
  std::span<const Edge> edges() const { return g_.edges(); }
  std::span<const VertexId> neighbors(VertexId v) const { return g_.neighbors(v); }
  std::size_t vertex_count() const { return g_.vertex_count(); }
  std::size_t edge_count() const { return g_.edge_count(); }
  bool has_vertex(VertexId v) const { return g_.has_vertex(v); }
  bool has_edge(VertexId a, VertexId b) const { return g_.has_edge(a, b); }

  bool operator==(const Hypothesis& o) const {
    auto a = key();
    auto b = o.key();
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
  }
  /// Canonical identity: the sorted edge list.
  std::span<const Edge> key() const { return g_.edges(); }

 private:
  explicit Hypothesis(Subgraph g) : g_(std::move(g)) {}
  Subgraph g_;
};

std::vector<std::vector<VertexId>> connected_components(const Subgraph& g);
bool is_connected(const Subgraph& g);

}  // namespace kg
