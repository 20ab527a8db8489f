#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kg/context.hpp"
#include "kg/graph.hpp"

namespace kg {

struct GraphStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;  // 2|E| / (|V|(|V|-1)), 0 for |V| < 2
  std::size_t component_count = 0;
  std::size_t max_component = 0;
  double avg_component = 0.0;
  double median_component = 0.0;
  // Hop-distance eccentricity extremes per component, means weighted by
  // component vertex count. Singleton components contribute zeros.
  double radius = 0.0;
  double diameter = 0.0;
  double transitivity = 0.0;  // 3 * triangles / connected triples
  double avg_shortest_path_hops = 0.0;
  double avg_shortest_path_delta = 0.0;
  std::map<std::size_t, std::size_t> degree_histogram;
};

/// All fields populated; nullopt for the empty graph where the metrics are
/// undefined.
std::optional<GraphStats> graph_stats(const Subgraph& g, const DistanceOracle& delta);

/// Flat key-value TSV (one `key<TAB>value` line per field; histogram as
/// `degree_N` keys) and JSON forms.
std::string stats_to_tsv(const std::optional<GraphStats>& s);
std::string stats_to_json(const std::optional<GraphStats>& s);

}  // namespace kg
