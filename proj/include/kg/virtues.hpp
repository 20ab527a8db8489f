#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kg/cluster.hpp"
#include "kg/context.hpp"
#include "kg/graph.hpp"
#include "kg/paths.hpp"

namespace kg::virtues {

/// The six measure values of one hypothesis.
struct VirtueVector {
  double conservatism = 0.0;       // C, in (0,1]
  double modesty = 0.0;            // M, >= 1 for simple graphs
  double simplicity_local = 0.0;   // S1 = entropy(H)
  double simplicity_global = 0.0;  // S2 = entropy(U\H) / entropy(U)
  std::int64_t generality = 0;     // G = |E_A| * |V_H|
  double refutability = 0.0;       // R_k, in (0,1]
  int k = 1;

  std::string to_json() const;
  static VirtueVector from_json(const std::string& json);
};

/// Mean over the canonical shortest-path set of endpoint distance divided
/// by path length. Paths with coincident endpoints in the metric count as
/// fully conservative.
double conservatism(const Hypothesis& h, const DistanceOracle& delta);

/// Inverse edge density |V|(|V|-1) / (2|E|).
double modesty(const Hypothesis& h);

/// Shannon entropy (log2) of per-cluster membership probabilities over the
/// vertex set. Overlapping clusters are fine (probabilities need not sum to
/// one); zero-probability labels contribute nothing. Throws on empty input.
double cluster_entropy(std::span<const VertexId> vertices,
                       const cluster::ClusterLabeling& gamma);

double simplicity_local(const Hypothesis& h, const cluster::ClusterLabeling& gamma);

/// entropy(universe minus H) / entropy(universe). Errors when H covers the
/// whole universe or the universe entropy is zero.
double simplicity_global(const Hypothesis& h, const Subgraph& universe,
                         const cluster::ClusterLabeling& gamma);

/// |E_A| * |V_H| where E_A is the set of universe edges crossing from H to
/// its adjacency frontier. Zero when nothing connects to the outside.
std::int64_t generality(const Hypothesis& h, const Subgraph& universe);

/// Same quantity by explicit enumeration: each frontier edge (u,x)
/// contributes the bare edge plus u prepended to every in-H canonical
/// shortest path starting at x.
std::int64_t generality_by_paths(const Hypothesis& h, const Subgraph& universe,
                                 const DistanceOracle& delta);

/// Iteratively removes the highest-betweenness vertex (smallest id on ties),
/// re-counting the surviving shortest-path set each step; the ratio of the
/// original path count over original plus survivors.
double refutability(const Hypothesis& h, const DistanceOracle& delta, int k);

/// Precomputed per-universe state shared by all scorings against it.
class ScoringContext {
 public:
  ScoringContext(const Subgraph& universe, const cluster::ClusterLabeling& gamma,
                 const DistanceOracle& delta, int k_refut);

  const Subgraph& universe() const { return *universe_; }
  const cluster::ClusterLabeling& gamma() const { return *gamma_; }
  const DistanceOracle& delta() const { return *delta_; }
  int k_refut() const { return k_refut_; }
  double universe_entropy() const { return universe_entropy_; }
  std::span<const std::int64_t> universe_label_counts() const {
    return universe_label_counts_;
  }

 private:
  const Subgraph* universe_;
  const cluster::ClusterLabeling* gamma_;
  const DistanceOracle* delta_;
  int k_refut_;
  std::vector<std::int64_t> universe_label_counts_;
  double universe_entropy_ = 0.0;
};

VirtueVector score(const Hypothesis& h, const ScoringContext& ctx);
VirtueVector score(const Hypothesis& h, const Subgraph& universe,
                   const cluster::ClusterLabeling& gamma, const DistanceOracle& delta,
                   int k_refut);

/// Scores a whole population; parallel over hypotheses, results indexed by
/// input position, hence identical for any worker count.
std::vector<VirtueVector> score_population(std::span<const Hypothesis> population,
                                           const ScoringContext& ctx, int workers);

}  // namespace kg::virtues
