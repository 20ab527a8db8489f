#include "kg/ranking.hpp"

#include <algorithm>
#include <map>

#include "kg/error.hpp"

namespace kg::virtues {

RankMode rank_mode_from_string(const std::string& s) {
  if (s == "full_pairwise") return RankMode::full_pairwise;
  if (s == "covering") return RankMode::covering;
  throw UsageError("unknown multigraph mode: " + s);
}

std::string to_string(RankMode m) {
  return m == RankMode::full_pairwise ? "full_pairwise" : "covering";
}

std::size_t RankingMultigraph::in_degree(std::uint32_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges)
    if (e.to == v) ++d;
  return d;
}

std::size_t RankingMultigraph::out_degree(std::uint32_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges)
    if (e.from == v) ++d;
  return d;
}

RankingMultigraph build_ranking_multigraph(const std::vector<MeasureColumn>& measures,
                                           std::size_t hypothesis_count, RankMode mode) {
  RankingMultigraph r;
  r.hypothesis_count = hypothesis_count;
  r.mode = mode;
  for (std::uint32_t m = 0; m < measures.size(); ++m) {
    const MeasureColumn& col = measures[m];
    if (col.values.size() != hypothesis_count)
      throw UsageError("measure column size mismatch: " + col.label);
    r.measure_labels.push_back(col.label);
    if (mode == RankMode::full_pairwise) {
      for (std::uint32_t i = 0; i < hypothesis_count; ++i)
        for (std::uint32_t j = 0; j < hypothesis_count; ++j)
          if (col.values[i] > col.values[j]) r.edges.push_back({i, j, m});
    } else {
      // Group indices by value descending; edges only between adjacent groups.
      std::map<double, std::vector<std::uint32_t>, std::greater<>> groups;
      for (std::uint32_t i = 0; i < hypothesis_count; ++i) groups[col.values[i]].push_back(i);
      const std::vector<std::uint32_t>* prev = nullptr;
      for (const auto& [value, members] : groups) {
        if (prev) {
          for (std::uint32_t hi : *prev)
            for (std::uint32_t lo : members) r.edges.push_back({hi, lo, m});
        }
        prev = &members;
      }
    }
  }
  return r;
}

std::vector<MeasureColumn> measure_columns(std::span<const VirtueVector> scored) {
  std::vector<MeasureColumn> cols(6);
  cols[0].label = "C";
  cols[1].label = "M";
  cols[2].label = "S1";
  cols[3].label = "S2";
  cols[4].label = "G";
  cols[5].label = "R";
  for (const VirtueVector& v : scored) {
    cols[0].values.push_back(v.conservatism);
    cols[1].values.push_back(v.modesty);
    cols[2].values.push_back(v.simplicity_local);
    cols[3].values.push_back(v.simplicity_global);
    cols[4].values.push_back(static_cast<double>(v.generality));
    cols[5].values.push_back(v.refutability);
  }
  return cols;
}

RankingMultigraph build_ranking_multigraph(std::span<const VirtueVector> scored,
                                           RankMode mode) {
  return build_ranking_multigraph(measure_columns(scored), scored.size(), mode);
}

std::vector<RankedHypothesis> combined_rank(const RankingMultigraph& r) {
  std::vector<RankedHypothesis> out(r.hypothesis_count);
  for (std::uint32_t i = 0; i < r.hypothesis_count; ++i) out[i].index = i;
  for (const auto& e : r.edges) {
    ++out[e.from].out_degree;
    ++out[e.to].in_degree;
  }
  for (auto& h : out) {
    std::size_t total = h.in_degree + h.out_degree;
    h.score = total == 0 ? 0.0 : static_cast<double>(h.out_degree) / total;
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedHypothesis& a,
                                              const RankedHypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    bool a_isolated = a.in_degree + a.out_degree == 0;
    bool b_isolated = b.in_degree + b.out_degree == 0;
    if (a_isolated != b_isolated) return b_isolated;  // isolated sort last
    return a.index < b.index;
  });
  return out;
}

}  // namespace kg::virtues
