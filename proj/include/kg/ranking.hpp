#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kg/virtues.hpp"

namespace kg::virtues {

enum class RankMode { full_pairwise, covering };

RankMode rank_mode_from_string(const std::string& s);
std::string to_string(RankMode m);

/// One measure's values across the compared hypotheses.
struct MeasureColumn {
  std::string label;
  std::vector<double> values;  // one per hypothesis, by index
};

/// Directed labeled multigraph over hypothesis indices: edge (i -> j, X)
/// means hypothesis i strictly beats j on measure X. Ties never produce
/// edges. full_pairwise materializes every strict pair; covering only the
/// edges between adjacent groups of each measure's strict value chain.
struct RankingMultigraph {
  struct LabeledEdge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    std::uint32_t measure = 0;  // index into measure_labels
  };
  std::size_t hypothesis_count = 0;
  std::vector<std::string> measure_labels;
  std::vector<LabeledEdge> edges;
  RankMode mode = RankMode::full_pairwise;

  std::size_t in_degree(std::uint32_t v) const;
  std::size_t out_degree(std::uint32_t v) const;
};

RankingMultigraph build_ranking_multigraph(const std::vector<MeasureColumn>& measures,
                                           std::size_t hypothesis_count, RankMode mode);
RankingMultigraph build_ranking_multigraph(std::span<const VirtueVector> scored,
                                           RankMode mode);

/// The six standard measure columns (C, M, S1, S2, G, R) of a scored set.
std::vector<MeasureColumn> measure_columns(std::span<const VirtueVector> scored);

struct RankedHypothesis {
  std::uint32_t index = 0;
  double score = 0.0;  // d_o / (d_o + d_i); isolated vertices score 0
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
};

/// Descending by score; isolated vertices sort after scored ones; ties by
/// index.
std::vector<RankedHypothesis> combined_rank(const RankingMultigraph& r);

}  // namespace kg::virtues
