#include "kg/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "kg/error.hpp"

namespace kg {

bool CanonicalPath::contains(VertexId v) const {
  return std::find(verts.begin(), verts.end(), v) != verts.end();
}

std::span<const VertexId> CanonicalPath::interior() const {
  if (verts.size() <= 2) return {};
  return {verts.data() + 1, verts.size() - 2};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility slack for "x lies on a shortest path through y". Equal-cost
// alternatives reached by different addition orders can differ in the last
// few ulps.
constexpr double kTieEps = 1e-9;

std::unordered_map<VertexId, double> dijkstra(const Subgraph& g, const DistanceOracle& delta,
                                              VertexId source) {
  std::unordered_map<VertexId, double> dist;
  dist.reserve(g.vertex_count());
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    auto it = dist.find(v);
    if (it != dist.end() && d > it->second) continue;
    for (VertexId n : g.neighbors(v)) {
      double nd = d + delta(v, n);
      auto found = dist.find(n);
      if (found == dist.end() || nd < found->second) {
        dist[n] = nd;
        queue.emplace(nd, n);
      }
    }
  }
  return dist;
}

// Lexicographically smallest minimal-cost path from s to t, built greedily:
// at each step take the smallest neighbor that still admits an optimal
// completion (dist_to_t holds distances toward t).
CanonicalPath walk_lex_smallest(const Subgraph& g, const DistanceOracle& delta, VertexId s,
                                VertexId t, const std::unordered_map<VertexId, double>& dist_to_t) {
  CanonicalPath path;
  path.verts.push_back(s);
  VertexId x = s;
  double remaining = dist_to_t.at(s);
  std::size_t guard = g.vertex_count() + 1;
  while (x != t) {
    if (guard-- == 0) throw DataError("shortest-path reconstruction did not terminate");
    bool advanced = false;
    for (VertexId y : g.neighbors(x)) {  // ascending ids
      auto dy = dist_to_t.find(y);
      if (dy == dist_to_t.end()) continue;
      double step = delta(x, y);
      if (std::abs(remaining - (step + dy->second)) <=
          kTieEps * std::max(1.0, remaining)) {
        path.verts.push_back(y);
        path.total_delta += step;  // literal sum over the chosen edges
        remaining = dy->second;
        x = y;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw DataError("shortest-path reconstruction stuck");
  }
  return path;
}

}  // namespace

std::vector<CanonicalPath> shortest_paths(const Subgraph& g, const DistanceOracle& delta) {
  std::vector<CanonicalPath> out;
  auto verts = g.vertices();
  // One Dijkstra per target; sources below the target in id order share it,
  // which also yields the canonical orientation for free.
  for (VertexId t : verts) {
    auto dist = dijkstra(g, delta, t);
    for (VertexId s : verts) {
      if (s >= t) break;
      if (!dist.count(s)) continue;  // different component
      out.push_back(walk_lex_smallest(g, delta, s, t, dist));
    }
  }
  std::sort(out.begin(), out.end(), [](const CanonicalPath& a, const CanonicalPath& b) {
    if (a.verts.front() != b.verts.front()) return a.verts.front() < b.verts.front();
    return a.verts.back() < b.verts.back();
  });
  return out;
}

std::optional<CanonicalPath> shortest_path_between(const Subgraph& g,
                                                   const DistanceOracle& delta, VertexId a,
                                                   VertexId b) {
  if (a == b) return std::nullopt;
  VertexId s = std::min(a, b), t = std::max(a, b);
  if (!g.has_vertex(s) || !g.has_vertex(t)) return std::nullopt;
  auto dist = dijkstra(g, delta, t);
  if (!dist.count(s)) return std::nullopt;
  return walk_lex_smallest(g, delta, s, t, dist);
}

std::vector<std::pair<VertexId, double>> betweenness_all(const Subgraph& g,
                                                         const DistanceOracle& delta) {
  auto paths = shortest_paths(g, delta);
  if (paths.empty()) throw DataError("betweenness undefined: graph has no shortest paths");
  std::unordered_map<VertexId, std::size_t> hits;
  for (const CanonicalPath& p : paths)
    for (VertexId v : p.verts) ++hits[v];
  std::vector<std::pair<VertexId, double>> out;
  out.reserve(g.vertex_count());
  for (VertexId v : g.vertices()) {
    auto it = hits.find(v);
    double count = it == hits.end() ? 0.0 : static_cast<double>(it->second);
    out.emplace_back(v, count / static_cast<double>(paths.size()));
  }
  return out;
}

double betweenness(VertexId v, const Subgraph& g, const DistanceOracle& delta) {
  if (!g.has_vertex(v)) throw DataError("betweenness: vertex not in graph");
  for (const auto& [u, c] : betweenness_all(g, delta))
    if (u == v) return c;
  throw DataError("betweenness: vertex not in graph");
}

}  // namespace kg
