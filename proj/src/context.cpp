#include "kg/context.hpp"

#include <algorithm>
#include <cmath>

#include "kg/error.hpp"

namespace kg {

ContextVectors build_context_vectors(const UniverseGraph& u) {
  ContextVectors cv;
  for (VertexId v : u.vertices()) {
    std::vector<ContextVectors::Entry> row;
    auto nbrs = u.neighbors(v);
    row.reserve(nbrs.size());
    for (VertexId n : nbrs) row.emplace_back(n, u.edge_weight(v, n));
    // neighbors() is sorted, so the row already is
    cv.rows_[v] = std::move(row);
  }
  return cv;
}

std::vector<VertexId> ContextVectors::vertex_ids() const {
  std::vector<VertexId> ids;
  ids.reserve(rows_.size());
  for (const auto& r : rows_) ids.push_back(r.first);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::span<const ContextVectors::Entry> ContextVectors::row(VertexId v) const {
  auto it = rows_.find(v);
  if (it == rows_.end())
    throw DataError("unknown vertex in context vectors: " + std::to_string(v));
  return it->second;
}

double euclidean_distance(const ContextVectors& cv, VertexId x, VertexId y) {
  if (x == y) {
    cv.row(x);  // still validate the id
    return 0.0;
  }
  auto rx = cv.row(x);
  auto ry = cv.row(y);
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < rx.size() || j < ry.size()) {
    if (j >= ry.size() || (i < rx.size() && rx[i].first < ry[j].first)) {
      sum += rx[i].second * rx[i].second;
      ++i;
    } else if (i >= rx.size() || ry[j].first < rx[i].first) {
      sum += ry[j].second * ry[j].second;
      ++j;
    } else {
      double d = rx[i].second - ry[j].second;
      sum += d * d;
      ++i;
      ++j;
    }
  }
  return std::sqrt(sum);
}

DistanceOracle::DistanceOracle(ContextVectors cv, std::size_t dense_cutoff)
    : cv_(std::move(cv)) {
  std::size_t n = cv_.dimension();
  if (n > 0 && n <= dense_cutoff) {
    dense_ = true;
    ids_ = cv_.vertex_ids();
    pos_.reserve(n);
    for (std::size_t i = 0; i < ids_.size(); ++i) pos_[ids_[i]] = i;
    table_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = euclidean_distance(cv_, ids_[i], ids_[j]);
        table_[i * n + j] = d;
        table_[j * n + i] = d;
      }
  } else {
    shards_ = std::make_unique<std::array<Shard, kShards>>();
  }
}

double DistanceOracle::operator()(VertexId x, VertexId y) const {
  if (x == y) return 0.0;
  if (dense_) {
    auto ix = pos_.find(x);
    auto iy = pos_.find(y);
    if (ix == pos_.end() || iy == pos_.end())
      throw DataError("unknown vertex in distance lookup");
    return table_[ix->second * ids_.size() + iy->second];
  }
  Edge e = Edge::make(x, y);
  std::uint64_t key = (std::uint64_t{e.u} << 32) | e.v;
  Shard& shard = (*shards_)[key % kShards];
  {
    std::shared_lock lock(shard.mu);
    auto it = shard.cache.find(key);
    if (it != shard.cache.end()) return it->second;
  }
  double d = euclidean_distance(cv_, x, y);
  {
    std::unique_lock lock(shard.mu);
    shard.cache.emplace(key, d);
  }
  return d;
}

}  // namespace kg
