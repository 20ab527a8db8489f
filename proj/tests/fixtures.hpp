#pragma once

// The six-vertex sample universe used across the suites, its three
// hypothesis subgraphs and the overlapping three-cluster labeling.

#include <map>
#include <utility>
#include <vector>

#include "kg/cluster.hpp"
#include "kg/context.hpp"
#include "kg/graph.hpp"

namespace fixtures {

inline kg::UniverseGraph toy_universe() {
  kg::UniverseGraph u;
  u.add_edge(1, 2, 0.5);
  u.add_edge(1, 3, 1.0);
  u.add_edge(2, 3, 1.0);
  u.add_edge(2, 4, 0.5);
  u.add_edge(2, 6, 1.0);
  u.add_edge(4, 5, 0.5);
  u.add_edge(4, 6, 0.5);
  u.freeze();
  return u;
}

// Off-diagonal distances of the toy universe, four decimals.
inline std::map<std::pair<kg::VertexId, kg::VertexId>, double> toy_distances() {
  return {
      {{1, 2}, 1.3229}, {{1, 3}, 1.5},    {{1, 4}, 1.2247}, {{1, 5}, 1.2247},
      {{1, 6}, 1.2247}, {{2, 3}, 1.8708}, {{2, 4}, 1.5},    {{2, 5}, 1.5},
      {{2, 6}, 1.8028}, {{3, 4}, 1.3229}, {{3, 5}, 1.5},    {{3, 6}, 1.118},
      {{4, 5}, 1.0},    {{4, 6}, 1.0},    {{5, 6}, 1.0},
  };
}

inline kg::Hypothesis toy_E(const kg::UniverseGraph& u) {
  return kg::Hypothesis::create(u, {4, 5, 6},
                                {kg::Edge::make(4, 5), kg::Edge::make(4, 6)});
}

inline kg::Hypothesis toy_F(const kg::UniverseGraph& u) {
  return kg::Hypothesis::create(
      u, {1, 2, 3}, {kg::Edge::make(1, 2), kg::Edge::make(2, 3), kg::Edge::make(1, 3)});
}

inline kg::Hypothesis toy_G(const kg::UniverseGraph& u) {
  return kg::Hypothesis::create(u, {2, 4, 5, 6},
                                {kg::Edge::make(2, 4), kg::Edge::make(2, 6),
                                 kg::Edge::make(4, 5), kg::Edge::make(4, 6)});
}

// Overlapping clusters A:{1,2}, B:{1,4,5,6}, C:{3,4,6}.
inline kg::cluster::ClusterLabeling toy_gamma() {
  kg::cluster::ClusterLabeling g;
  auto a = g.intern("A");
  auto b = g.intern("B");
  auto c = g.intern("C");
  g.add(1, a);
  g.add(2, a);
  g.add(1, b);
  g.add(4, b);
  g.add(5, b);
  g.add(6, b);
  g.add(3, c);
  g.add(4, c);
  g.add(6, c);
  return g;
}

inline kg::DistanceOracle toy_oracle(const kg::UniverseGraph& u) {
  return kg::DistanceOracle(kg::build_context_vectors(u));
}

}  // namespace fixtures
