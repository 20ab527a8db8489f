#include "kg/graph.hpp"

#include <algorithm>

#include "kg/error.hpp"

namespace kg {

Subgraph Subgraph::build(std::vector<VertexId> vertices, std::vector<Edge> edges) {
  Subgraph g;
  for (const Edge& e : edges) {
    if (e.u == e.v) throw DataError("self-loop on vertex " + std::to_string(e.u));
    vertices.push_back(e.u);
    vertices.push_back(e.v);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  for (Edge& e : edges) e = Edge::make(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  for (const Edge& e : edges) {
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
  }
  for (auto& [v, nbrs] : g.adj_) std::sort(nbrs.begin(), nbrs.end());
  g.verts_ = std::move(vertices);
  g.edges_ = std::move(edges);
  return g;
}

std::span<const VertexId> Subgraph::neighbors(VertexId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) return {};
  return it->second;
}

bool Subgraph::has_vertex(VertexId v) const {
  return std::binary_search(verts_.begin(), verts_.end(), v);
}

bool Subgraph::has_edge(VertexId a, VertexId b) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge::make(a, b));
}

Subgraph Subgraph::without_vertex(VertexId v) const {
  std::vector<VertexId> verts;
  verts.reserve(verts_.size());
  for (VertexId x : verts_)
    if (x != v) verts.push_back(x);
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const Edge& e : edges_)
    if (e.u != v && e.v != v) edges.push_back(e);
  return build(std::move(verts), std::move(edges));
}

void UniverseGraph::add_vertex(VertexId v) {
  if (frozen_) throw UsageError("universe is frozen");
  pending_verts_.push_back(v);
}

void UniverseGraph::add_edge(VertexId a, VertexId b, double weight) {
  if (frozen_) throw UsageError("universe is frozen");
  if (a == b) throw DataError("self-loop on vertex " + std::to_string(a));
  if (!(weight > 0.0) || weight > 1.0)
    throw DataError("edge weight outside (0,1]: " + std::to_string(weight));
  pending_edges_.emplace_back(Edge::make(a, b), weight);
}

void UniverseGraph::freeze() {
  if (frozen_) return;
  std::vector<Edge> edges;
  edges.reserve(pending_edges_.size());
  for (const auto& [e, w] : pending_edges_) {
    weights_[e] = w;  // later additions win
    edges.push_back(e);
  }
  topo_ = Subgraph::build(std::move(pending_verts_), std::move(edges));
  pending_verts_.clear();
  pending_edges_.clear();
  frozen_ = true;
}

double UniverseGraph::edge_weight(VertexId a, VertexId b) const {
  auto it = weights_.find(Edge::make(a, b));
  if (it == weights_.end())
    throw DataError("no edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
  return it->second;
}

void UniverseGraph::set_vertex_label(const std::string& key, VertexId v,
                                     const std::string& value) {
  vertex_labels_[key][v] = value;
}

void UniverseGraph::set_edge_label(const std::string& key, Edge e, const std::string& value) {
  edge_labels_[key][Edge::make(e.u, e.v)] = value;
}

std::optional<std::string> UniverseGraph::vertex_label(const std::string& key,
                                                       VertexId v) const {
  auto m = vertex_labels_.find(key);
  if (m == vertex_labels_.end()) return std::nullopt;
  auto it = m->second.find(v);
  if (it == m->second.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> UniverseGraph::edge_label(const std::string& key, Edge e) const {
  auto m = edge_labels_.find(key);
  if (m == edge_labels_.end()) return std::nullopt;
  auto it = m->second.find(Edge::make(e.u, e.v));
  if (it == m->second.end()) return std::nullopt;
  return it->second;
}

Hypothesis Hypothesis::create(const UniverseGraph& universe, std::vector<VertexId> vertices,
                              std::vector<Edge> edges) {
  return create_in(universe.topology(), std::move(vertices), std::move(edges));
}

Hypothesis Hypothesis::create_in(const Subgraph& universe, std::vector<VertexId> vertices,
                                 std::vector<Edge> edges) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.size() < 2) throw DataError("hypothesis: needs >= 2 vertices");
  if (edges.empty()) throw DataError("hypothesis: needs >= 1 edge");
  for (VertexId v : vertices)
    if (!universe.has_vertex(v))
      throw DataError("hypothesis: vertex " + std::to_string(v) + " not in universe");
  for (const Edge& e : edges) {
    if (!universe.has_edge(e.u, e.v))
      throw DataError("hypothesis: edge {" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + "} not in universe");
    if (!std::binary_search(vertices.begin(), vertices.end(), e.u) ||
        !std::binary_search(vertices.begin(), vertices.end(), e.v))
      throw DataError("hypothesis: edge endpoint outside vertex set");
  }
  Subgraph g = Subgraph::build(std::move(vertices), std::move(edges));
  if (!is_connected(g)) throw DataError("hypothesis: not connected");
  return Hypothesis(std::move(g));
}

std::vector<std::vector<VertexId>> connected_components(const Subgraph& g) {
  std::vector<std::vector<VertexId>> components;
  std::unordered_map<VertexId, bool> seen;
  for (VertexId start : g.vertices()) {
    if (seen[start]) continue;
    std::vector<VertexId> comp;
    std::vector<VertexId> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (VertexId n : g.neighbors(v)) {
        if (!seen[n]) {
          seen[n] = true;
          stack.push_back(n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

bool is_connected(const Subgraph& g) { return connected_components(g).size() == 1; }

}  // namespace kg
