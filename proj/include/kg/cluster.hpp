#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kg/context.hpp"
#include "kg/graph.hpp"

namespace kg::cluster {

using LabelId = std::uint32_t;

/// Vertex -> set-of-cluster-labels map. Vertices absent from the map carry
/// the empty label set (legal, contributes no mass to entropies).
class ClusterLabeling {
 public:
  LabelId intern(const std::string& name);
  void add(VertexId v, LabelId l);
  void ensure_vertex(VertexId v);

  std::span<const LabelId> labels_of(VertexId v) const;
  const std::vector<std::string>& label_names() const { return names_; }
  std::size_t label_count() const { return names_.size(); }
  std::size_t vertex_count() const { return membership_.size(); }

  /// `vertex_id<TAB>label` per membership, sorted by (vertex, label name).
  std::string to_tsv() const;
  static ClusterLabeling from_tsv(const std::string& content);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> ids_;
  std::unordered_map<VertexId, std::vector<LabelId>> membership_;  // sorted
};

/// Maximal cliques of the graph with an edge wherever delta(x,y) < tau
/// (strict). Overlapping membership allowed; isolated vertices become
/// singleton clusters. Cliques are labeled c0, c1, ... in lexicographic
/// order of their sorted member lists. Intended for small vertex sets.
ClusterLabeling threshold_clique_clusters(const DistanceOracle& delta,
                                          std::span<const VertexId> vertices, double tau);

struct KMeansConfig {
  std::size_t bucket_size = 2000;
  std::size_t k_per_bucket = 40;
  std::size_t seeds_per_bucket = 50;
  std::uint64_t rng_seed = 0;
  std::size_t max_iterations = 100;
  double convergence_tol = 1e-6;
};

/// Partitions the vectors into buckets (random seed draw, centroid, nearest
/// fill), then runs K-means inside each bucket. Every vertex receives
/// exactly one label of the form b<bucket>.k<cluster>. Deterministic for a
/// fixed seed. Fewer vectors than seeds_per_bucket -> one bucket.
ClusterLabeling bucketed_kmeans(const ContextVectors& cv, const KMeansConfig& cfg);

}  // namespace kg::cluster
