#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "kg/graph.hpp"

namespace kg {

/// Per-vertex sparse row of the weighted adjacency matrix: entry (x,y) is
/// the weight of edge {x,y}, zero (absent) elsewhere. Entry (x,x) is never
/// stored.
class ContextVectors {
 public:
  using Entry = std::pair<VertexId, double>;

  std::span<const Entry> row(VertexId v) const;
  bool has_vertex(VertexId v) const { return rows_.count(v) != 0; }
  std::size_t dimension() const { return rows_.size(); }
  std::vector<VertexId> vertex_ids() const;  // sorted

 private:
  friend ContextVectors build_context_vectors(const UniverseGraph& u);
  std::unordered_map<VertexId, std::vector<Entry>> rows_;  // sorted by id
};

ContextVectors build_context_vectors(const UniverseGraph& u);

/// sqrt of summed squared coordinate differences between the two context
/// rows. Throws DataError for unknown vertex ids.
double euclidean_distance(const ContextVectors& cv, VertexId x, VertexId y);

/// Metric lookup used by every path computation. Below `dense_cutoff`
/// vertices, all pairs are precomputed into a flat table; above it, values
/// are computed on demand and memoized in a sharded cache so concurrent
/// readers stay cheap.
class DistanceOracle {
 public:
  explicit DistanceOracle(ContextVectors cv, std::size_t dense_cutoff = 10000);

  double operator()(VertexId x, VertexId y) const;
  const ContextVectors& context() const { return cv_; }

 private:
  ContextVectors cv_;
  bool dense_ = false;
  std::vector<VertexId> ids_;                      // sorted, dense mode
  std::unordered_map<VertexId, std::size_t> pos_;  // id -> table row
  std::vector<double> table_;                      // n*n, dense mode

  struct Shard {
    mutable std::shared_mutex mu;
    mutable std::unordered_map<std::uint64_t, double> cache;
  };
  static constexpr std::size_t kShards = 64;
  std::unique_ptr<std::array<Shard, kShards>> shards_;
};

}  // namespace kg
