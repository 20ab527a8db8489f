#include "kg/stats.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "kg/util.hpp"

namespace kg {

namespace {

// Hop distances from source, restricted to its component.
std::unordered_map<VertexId, std::size_t> bfs_hops(const Subgraph& g, VertexId source) {
  std::unordered_map<VertexId, std::size_t> dist;
  std::queue<VertexId> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (VertexId n : g.neighbors(v)) {
      if (!dist.count(n)) {
        dist[n] = dist[v] + 1;
        queue.push(n);
      }
    }
  }
  return dist;
}

std::unordered_map<VertexId, double> dijkstra_delta(const Subgraph& g,
                                                    const DistanceOracle& delta,
                                                    VertexId source) {
  std::unordered_map<VertexId, double> dist;
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (VertexId n : g.neighbors(v)) {
      double nd = d + delta(v, n);
      auto it = dist.find(n);
      if (it == dist.end() || nd < it->second) {
        dist[n] = nd;
        queue.emplace(nd, n);
      }
    }
  }
  return dist;
}

}  // namespace

std::optional<GraphStats> graph_stats(const Subgraph& g, const DistanceOracle& delta) {
  if (g.vertex_count() == 0) return std::nullopt;
  GraphStats s;
  s.vertex_count = g.vertex_count();
  s.edge_count = g.edge_count();
  double n = static_cast<double>(s.vertex_count);
  s.density = s.vertex_count >= 2 ? 2.0 * s.edge_count / (n * (n - 1.0)) : 0.0;

  for (VertexId v : g.vertices()) ++s.degree_histogram[g.degree(v)];

  // Transitivity: 3 * triangles / connected triples, whole graph.
  std::size_t triangles3 = 0;  // each triangle counted once per corner
  std::size_t triples = 0;
  for (VertexId v : g.vertices()) {
    auto nbrs = g.neighbors(v);
    std::size_t d = nbrs.size();
    triples += d * (d - 1) / 2;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (g.has_edge(nbrs[i], nbrs[j])) ++triangles3;
  }
  s.transitivity = triples == 0 ? 0.0 : static_cast<double>(triangles3) / triples;

  auto components = connected_components(g);
  s.component_count = components.size();
  std::vector<std::size_t> sizes;
  sizes.reserve(components.size());
  for (const auto& c : components) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  s.max_component = sizes.back();
  double total = 0.0;
  for (auto z : sizes) total += static_cast<double>(z);
  s.avg_component = total / static_cast<double>(sizes.size());
  s.median_component = sizes.size() % 2 == 1
                           ? static_cast<double>(sizes[sizes.size() / 2])
                           : (static_cast<double>(sizes[sizes.size() / 2 - 1]) +
                              static_cast<double>(sizes[sizes.size() / 2])) /
                                 2.0;

  // Per-component radius/diameter/asp, averaged weighted by component size.
  // Singleton components have zero eccentricity and no pairs; they weigh in
  // with zeros.
  double w_radius = 0.0, w_diameter = 0.0, w_asp = 0.0, w_aspd = 0.0;
  for (const auto& comp : components) {
    double comp_size = static_cast<double>(comp.size());
    if (comp.size() == 1) continue;  // zero contributions
    std::size_t ecc_min = std::numeric_limits<std::size_t>::max();
    std::size_t ecc_max = 0;
    double hop_sum = 0.0;
    double delta_sum = 0.0;
    std::size_t pair_count = comp.size() * (comp.size() - 1) / 2;
    for (VertexId v : comp) {
      auto hops = bfs_hops(g, v);
      std::size_t ecc = 0;
      for (const auto& [u, d] : hops) {
        ecc = std::max(ecc, d);
        if (u > v) hop_sum += static_cast<double>(d);
      }
      ecc_min = std::min(ecc_min, ecc);
      ecc_max = std::max(ecc_max, ecc);
      auto dd = dijkstra_delta(g, delta, v);
      for (const auto& [u, d] : dd)
        if (u > v) delta_sum += d;
    }
    w_radius += comp_size * static_cast<double>(ecc_min);
    w_diameter += comp_size * static_cast<double>(ecc_max);
    w_asp += comp_size * (hop_sum / static_cast<double>(pair_count));
    w_aspd += comp_size * (delta_sum / static_cast<double>(pair_count));
  }
  s.radius = w_radius / n;
  s.diameter = w_diameter / n;
  s.avg_shortest_path_hops = w_asp / n;
  s.avg_shortest_path_delta = w_aspd / n;
  return s;
}

std::string stats_to_tsv(const std::optional<GraphStats>& s) {
  std::ostringstream out;
  if (!s) {
    out << "empty\ttrue\n";
    return out.str();
  }
  out << "vertices\t" << s->vertex_count << "\n";
  out << "edges\t" << s->edge_count << "\n";
  out << "density\t" << format_double(s->density) << "\n";
  out << "components\t" << s->component_count << "\n";
  out << "max_component\t" << s->max_component << "\n";
  out << "avg_component\t" << format_double(s->avg_component) << "\n";
  out << "median_component\t" << format_double(s->median_component) << "\n";
  out << "radius\t" << format_double(s->radius) << "\n";
  out << "diameter\t" << format_double(s->diameter) << "\n";
  out << "transitivity\t" << format_double(s->transitivity) << "\n";
  out << "asp_hops\t" << format_double(s->avg_shortest_path_hops) << "\n";
  out << "asp_delta\t" << format_double(s->avg_shortest_path_delta) << "\n";
  for (const auto& [deg, count] : s->degree_histogram)
    out << "degree_" << deg << "\t" << count << "\n";
  return out.str();
}

std::string stats_to_json(const std::optional<GraphStats>& s) {
  nlohmann::json j;
  if (!s) {
    j["empty"] = true;
    return j.dump(2) + "\n";
  }
  j["vertices"] = s->vertex_count;
  j["edges"] = s->edge_count;
  j["density"] = s->density;
  j["components"] = s->component_count;
  j["max_component"] = s->max_component;
  j["avg_component"] = s->avg_component;
  j["median_component"] = s->median_component;
  j["radius"] = s->radius;
  j["diameter"] = s->diameter;
  j["transitivity"] = s->transitivity;
  j["asp_hops"] = s->avg_shortest_path_hops;
  j["asp_delta"] = s->avg_shortest_path_delta;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [deg, count] : s->degree_histogram) hist[std::to_string(deg)] = count;
  j["degree_histogram"] = hist;
  return j.dump(2) + "\n";
}

}  // namespace kg
