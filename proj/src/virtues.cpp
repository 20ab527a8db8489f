#include "kg/virtues.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg::virtues {

std::string VirtueVector::to_json() const {
  nlohmann::json j;
  j["C"] = conservatism;
  j["M"] = modesty;
  j["S1"] = simplicity_local;
  j["S2"] = simplicity_global;
  j["G"] = generality;
  j["R"] = refutability;
  j["k"] = k;
  return j.dump();
}

VirtueVector VirtueVector::from_json(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  VirtueVector v;
  v.conservatism = j.at("C").get<double>();
  v.modesty = j.at("M").get<double>();
  v.simplicity_local = j.at("S1").get<double>();
  v.simplicity_global = j.at("S2").get<double>();
  v.generality = j.at("G").get<std::int64_t>();
  v.refutability = j.at("R").get<double>();
  v.k = j.at("k").get<int>();
  return v;
}

double conservatism(const Hypothesis& h, const DistanceOracle& delta) {
  auto paths = shortest_paths(h.graph(), delta);
  if (paths.empty()) throw DataError("conservatism: no shortest paths");
  double sum = 0.0;
  for (const CanonicalPath& p : paths) {
    if (p.total_delta <= 0.0) {
      sum += 1.0;  // endpoints coincide in the metric
      continue;
    }
    sum += delta(p.verts.front(), p.verts.back()) / p.total_delta;
  }
  return sum / static_cast<double>(paths.size());
}

double modesty(const Hypothesis& h) {
  double n = static_cast<double>(h.vertex_count());
  return n * (n - 1.0) / (2.0 * static_cast<double>(h.edge_count()));
}

double cluster_entropy(std::span<const VertexId> vertices,
                       const cluster::ClusterLabeling& gamma) {
  if (vertices.empty()) throw DataError("cluster_entropy: empty vertex set");
  std::unordered_map<cluster::LabelId, std::size_t> counts;
  for (VertexId v : vertices)
    for (cluster::LabelId l : gamma.labels_of(v)) ++counts[l];
  double n = static_cast<double>(vertices.size());
  double entropy = 0.0;
  for (const auto& [l, c] : counts) {
    double p = static_cast<double>(c) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

double simplicity_local(const Hypothesis& h, const cluster::ClusterLabeling& gamma) {
  return cluster_entropy(h.vertices(), gamma);
}

namespace {

double complement_entropy(std::span<const VertexId> hyp_vertices, const Subgraph& universe,
                          const cluster::ClusterLabeling& gamma,
                          std::span<const std::int64_t> universe_counts) {
  std::size_t rest = universe.vertex_count() - hyp_vertices.size();
  if (rest == 0) throw DataError("simplicity_global: hypothesis covers the whole universe");
  std::vector<std::int64_t> counts(universe_counts.begin(), universe_counts.end());
  for (VertexId v : hyp_vertices)
    for (cluster::LabelId l : gamma.labels_of(v)) --counts[l];
  double n = static_cast<double>(rest);
  double entropy = 0.0;
  for (std::int64_t c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

std::vector<std::int64_t> label_counts(std::span<const VertexId> vertices,
                                       const cluster::ClusterLabeling& gamma) {
  std::vector<std::int64_t> counts(gamma.label_count(), 0);
  for (VertexId v : vertices)
    for (cluster::LabelId l : gamma.labels_of(v)) ++counts[l];
  return counts;
}

}  // namespace

double simplicity_global(const Hypothesis& h, const Subgraph& universe,
                         const cluster::ClusterLabeling& gamma) {
  double eu = cluster_entropy(universe.vertices(), gamma);
  if (eu <= 0.0)
    throw DataError("simplicity_global: universe entropy is zero (no cluster structure)");
  auto counts = label_counts(universe.vertices(), gamma);
  for (VertexId v : h.vertices())
    if (!universe.has_vertex(v))
      throw DataError("simplicity_global: hypothesis vertex outside universe");
  return complement_entropy(h.vertices(), universe, gamma, counts) / eu;
}

std::int64_t generality(const Hypothesis& h, const Subgraph& universe) {
  std::int64_t frontier_edges = 0;
  for (VertexId v : h.vertices())
    for (VertexId u : universe.neighbors(v))
      if (!h.has_vertex(u)) ++frontier_edges;
  return frontier_edges * static_cast<std::int64_t>(h.vertex_count());
}

std::int64_t generality_by_paths(const Hypothesis& h, const Subgraph& universe,
                                 const DistanceOracle& delta) {
  auto in_paths = shortest_paths(h.graph(), delta);
  std::int64_t count = 0;
  for (VertexId x : h.vertices()) {
    for (VertexId u : universe.neighbors(x)) {
      if (h.has_vertex(u)) continue;
      ++count;  // the frontier edge (u,x) itself
      for (const CanonicalPath& p : in_paths)
        if (p.verts.front() == x || p.verts.back() == x) ++count;  // (u,x,...,v)
    }
  }
  return count;
}

double refutability(const Hypothesis& h, const DistanceOracle& delta, int k) {
  if (k < 1) throw UsageError("refutability: k must be >= 1");
  Subgraph current = h.graph();
  auto paths = shortest_paths(current, delta);
  double base = static_cast<double>(paths.size());
  double denom = base;
  for (int i = 0; i < k; ++i) {
    if (current.vertex_count() < 2) break;  // remaining terms are zero
    if (paths.empty()) break;  // removals cannot bring paths back
    std::unordered_map<VertexId, std::size_t> hits;
    for (const CanonicalPath& p : paths)
      for (VertexId v : p.verts) ++hits[v];
    VertexId best = 0;
    std::size_t best_hits = 0;
    bool have = false;
    for (VertexId v : current.vertices()) {  // ascending: smallest id wins ties
      std::size_t c = hits.count(v) ? hits[v] : 0;
      if (!have || c > best_hits) {
        have = true;
        best = v;
        best_hits = c;
      }
    }
    current = current.without_vertex(best);
    paths = shortest_paths(current, delta);
    denom += static_cast<double>(paths.size());
  }
  return base / denom;
}

ScoringContext::ScoringContext(const Subgraph& universe,
                               const cluster::ClusterLabeling& gamma,
                               const DistanceOracle& delta, int k_refut)
    : universe_(&universe), gamma_(&gamma), delta_(&delta), k_refut_(k_refut) {
  universe_label_counts_ = label_counts(universe.vertices(), gamma);
  universe_entropy_ = cluster_entropy(universe.vertices(), gamma);
}

VirtueVector score(const Hypothesis& h, const ScoringContext& ctx) {
  VirtueVector v;
  v.conservatism = conservatism(h, ctx.delta());
  v.modesty = modesty(h);
  v.simplicity_local = simplicity_local(h, ctx.gamma());
  if (ctx.universe_entropy() <= 0.0)
    throw DataError("score: universe entropy is zero (no cluster structure)");
  v.simplicity_global =
      complement_entropy(h.vertices(), ctx.universe(), ctx.gamma(),
                         ctx.universe_label_counts()) /
      ctx.universe_entropy();
  v.generality = generality(h, ctx.universe());
  v.refutability = refutability(h, ctx.delta(), ctx.k_refut());
  v.k = ctx.k_refut();
  return v;
}

VirtueVector score(const Hypothesis& h, const Subgraph& universe,
                   const cluster::ClusterLabeling& gamma, const DistanceOracle& delta,
                   int k_refut) {
  ScoringContext ctx(universe, gamma, delta, k_refut);
  return score(h, ctx);
}

std::vector<VirtueVector> score_population(std::span<const Hypothesis> population,
                                           const ScoringContext& ctx, int workers) {
  std::vector<VirtueVector> out(population.size());
  parallel_for_index(population.size(), workers,
                     [&](std::size_t i) { out[i] = score(population[i], ctx); });
  return out;
}

}  // namespace kg::virtues
