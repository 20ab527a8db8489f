#pragma once

#include <optional>
#include <vector>

#include "kg/context.hpp"
#include "kg/graph.hpp"

namespace kg {

/// Simple path in canonical orientation: front() < back(); consecutive
/// vertices are adjacent in the graph the path was computed on.
struct CanonicalPath {
  std::vector<VertexId> verts;
  double total_delta = 0.0;

  std::size_t length() const { return verts.size(); }
  bool contains(VertexId v) const;
  /// Interior vertices, i.e. everything but the two endpoints.
  std::span<const VertexId> interior() const;
  bool operator==(const CanonicalPath& o) const { return verts == o.verts; }
};

/// One minimal-total-delta path per unordered connected vertex pair.
/// Ties broken by the lexicographically smallest vertex sequence oriented
/// from the smaller endpoint. Pairs in different components contribute
/// nothing. Output sorted by (front, back).
std::vector<CanonicalPath> shortest_paths(const Subgraph& g, const DistanceOracle& delta);

/// Canonical shortest path for one pair, or nullopt when a and b are
/// disconnected (or equal).
std::optional<CanonicalPath> shortest_path_between(const Subgraph& g,
                                                   const DistanceOracle& delta, VertexId a,
                                                   VertexId b);

/// Fraction of shortest paths containing v. Endpoints count as membership
/// (deliberately wider than the usual interior-only definition).
/// Throws DataError when the graph has no shortest paths at all.
double betweenness(VertexId v, const Subgraph& g, const DistanceOracle& delta);

/// Betweenness of every vertex from a single path-set computation.
std::vector<std::pair<VertexId, double>> betweenness_all(const Subgraph& g,
                                                         const DistanceOracle& delta);

}  // namespace kg
