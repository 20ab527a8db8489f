#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kg/evolve.hpp"
#include "kg/ingest.hpp"
#include "kg/paths.hpp"
#include "kg/ranking.hpp"

namespace kg::eval {

/// A discovery query: source and target term surface forms plus the named
/// intermediate concepts expected to link them.
struct DiscoveryTask {
  std::vector<std::string> source;
  std::vector<std::string> target;
  struct Intermediate {
    std::string name;
    std::vector<std::string> forms;
  };
  std::vector<Intermediate> intermediates;

  static DiscoveryTask from_json(const std::string& json);
  std::string to_json() const;
  void validate() const;  // source/target nonempty and disjoint
};

/// Offline literature-frequency lookup: normalized sorted term conjunction
/// (0x1F-joined) -> count. A missing key means "unknown", not zero.
class FrequencyOracle {
 public:
  static FrequencyOracle from_tsv(const std::string& content);
  std::string to_tsv() const;

  static std::string key_for_terms(std::vector<std::string> terms);
  std::optional<std::int64_t> count(const std::string& key) const;
  void set(const std::string& key, std::int64_t count);

 private:
  std::map<std::string, std::int64_t> counts_;
};

/// One ranked source-target path in a generation's union graph.
struct SolutionGraph {
  CanonicalPath path;
  int rank = 0;  // 1-based, unique
  virtues::VirtueVector virtues;
  double combined_score = 0.0;
};

/// Vertex/edge union of every individual in the snapshot.
Subgraph union_graph(const evolve::GenerationSnapshot& snap);

/// Canonical shortest paths between every (source vertex, target vertex)
/// pair, scored as hypotheses with the union graph as the universe, ordered
/// by combined rank (ties by path length, then vertex sequence).
/// Throws DataError when source or target resolve to nothing.
std::vector<SolutionGraph> solutions(const Subgraph& population_union,
                                     const std::set<VertexId>& source_vertices,
                                     const std::set<VertexId>& target_vertices,
                                     const DistanceOracle& delta,
                                     const cluster::ClusterLabeling& gamma,
                                     virtues::RankMode mode, int k_refut, int workers = 1);

/// Best (minimum) rank among solutions whose interior contains a resolution
/// of the intermediate; nullopt when none does.
std::optional<int> evd(const std::vector<SolutionGraph>& sols,
                       const std::set<VertexId>& intermediate_vertices);

/// Mean relative inverse rank over the intermediate-containing solutions:
/// (1/|Gc|) * sum over Gc of (|G| - rnk + 1)/|G|. nullopt when |Gc| = 0.
std::optional<double> evd_r(const std::vector<SolutionGraph>& sols,
                            const std::set<VertexId>& intermediate_vertices);

struct RarityResult {
  double mean = 0.0;    // rarity
  double median = 0.0;  // reported alongside
  double interestingness = 0.0;
  std::size_t path_count = 0;
};

/// Mean oracle count over the union of canonical shortest-path sets of the
/// intermediate-containing solutions. Every queried conjunction must exist
/// in the oracle; missing keys raise DataError listing them.
RarityResult rarity(const std::vector<SolutionGraph>& sols,
                    const std::vector<std::set<VertexId>>& intermediate_resolutions,
                    const DistanceOracle& delta, const ingest::TermLexicon& lexicon,
                    const FrequencyOracle& oracle);

double interestingness(double rarity_value);

/// Aggregated topic bookkeeping: every solution row carries its topic count
/// and unique/relevant/novel flags (novel implies relevant).
struct TopicCounts {
  std::int64_t all = 0;
  std::int64_t unique = 0;
  std::int64_t relevant = 0;
  std::int64_t novel = 0;
};

TopicCounts topic_counts_from_tsv(const std::string& content);

struct TopicScores {
  std::optional<double> density;    // unique / all
  std::optional<double> relevance;  // relevant / unique
  std::optional<double> novelty;    // novel / relevant
};

/// Validates unique <= all, relevant <= unique, novel <= relevant; undefined
/// denominators stay absent.
TopicScores topic_scores(const TopicCounts& counts);

struct GenerationMetricsRow {
  int generation = 0;
  double mean_evdr_all = 0.0;      // absent intermediates contribute 0
  double mean_evdr_present = 0.0;  // absent intermediates skipped (0 if none present)
  std::size_t claims_total = 0;
  std::size_t claims_with_intermediate = 0;
};

std::vector<GenerationMetricsRow> generation_metrics(
    const std::vector<evolve::GenerationSnapshot>& snapshots,
    const std::set<VertexId>& source_vertices, const std::set<VertexId>& target_vertices,
    const std::vector<std::set<VertexId>>& intermediate_resolutions,
    const DistanceOracle& delta, const cluster::ClusterLabeling& gamma,
    virtues::RankMode mode, int k_refut, int workers = 1);

std::string metrics_to_csv(const std::vector<GenerationMetricsRow>& rows);

/// Generation whose mean evd_r over all intermediates is highest (first on
/// ties).
std::size_t best_evdr_generation(const std::vector<GenerationMetricsRow>& rows);

}  // namespace kg::eval
