#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kg/graph.hpp"

namespace kg::ingest {

/// One extracted co-occurrence statement: two distinct normalized terms, a
/// distance weight in (0,1] and the source document id. Duplicates are
/// meaningful (they shift the co-occurrence probabilities).
struct BaseStatement {
  std::string term_a;
  std::string term_b;
  double distance_weight = 0.0;
  std::string doc_id;
};

struct RejectedLine {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<BaseStatement> statements;
  std::vector<RejectedLine> rejected;
  std::size_t total_lines = 0;

  std::string report_json() const;
};

/// Reads `term_a<TAB>term_b<TAB>w<TAB>doc_id` lines. Terms are normalized;
/// malformed lines (wrong field count, weight outside (0,1], empty or equal
/// terms) land in the rejection report instead of aborting.
ParseResult parse_statements(std::istream& in);
ParseResult parse_statements_file(const std::string& path);

/// Bijective term <-> id map. Ids are assigned in order of first appearance.
class TermLexicon {
 public:
  VertexId intern(const std::string& normalized_term);
  std::optional<VertexId> id_of(const std::string& normalized_term) const;
  const std::string& term_of(VertexId id) const;  // throws DataError
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

  std::string to_tsv() const;
  static TermLexicon from_tsv(const std::string& content);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, VertexId> ids_;
};

TermLexicon lexicon_from(const std::vector<BaseStatement>& statements);

/// Co-occurrence strength of one unordered term pair, in [-1,1].
struct PairScore {
  Edge pair;
  double npmi = 0.0;
};

enum class NpmiMode {
  weighted,  // probabilities from summed distance weights (default)
  counts,    // probabilities from raw statement counts
};

/// Scores every observed pair. Probabilities: p(x,y) = mass of statements on
/// the pair / total mass, p(x) = mass of statements containing x / total
/// mass; npmi = ln(p(x,y)/(p(x)p(y))) / -ln(p(x,y)), with the degenerate
/// p(x,y)=1 case mapping to +1. Output sorted by pair.
std::vector<PairScore> npmi_scores(const std::vector<BaseStatement>& statements,
                                   TermLexicon& lexicon, NpmiMode mode = NpmiMode::weighted);

struct UniverseFilter {
  enum class Kind { above_average_positive, absolute_threshold } kind =
      Kind::above_average_positive;
  double tau = 0.0;  // absolute_threshold only

  static UniverseFilter above_average_positive() { return {}; }
  static UniverseFilter absolute_threshold(double tau) {
    return {Kind::absolute_threshold, tau};
  }
};

/// Keeps pairs per the filter (default: npmi > 0 and strictly above the mean
/// of positive scores); surviving npmi becomes the edge weight, clamped into
/// (0,1]. Throws DataError when nothing survives.
UniverseGraph build_universe(const std::vector<PairScore>& scores, UniverseFilter filter);

std::string pair_scores_to_tsv(const std::vector<PairScore>& scores);

/// Manual result pruning: '+' lines whitelist, '-' lines blacklist; entries
/// are vertex ids or exact normalized terms.
class PruneList {
 public:
  static PruneList parse(const std::string& content, const TermLexicon& lexicon);
  std::set<VertexId> apply(std::set<VertexId> in) const;
  bool empty() const { return includes_.empty() && excludes_.empty(); }

 private:
  std::set<VertexId> includes_;
  std::set<VertexId> excludes_;
};

/// Inverted token index over lexicon terms plus the full normalized forms.
class FulltextIndex {
 public:
  static FulltextIndex build(const TermLexicon& lexicon);

  /// Vertices whose normalized label contains every normalized query token
  /// as a substring. Empty result is fine.
  std::set<VertexId> lookup(const std::string& query) const;
  std::set<VertexId> lookup(const std::string& query, const PruneList& prune) const;

  const std::map<std::string, std::set<VertexId>>& tokens() const { return token_map_; }
  std::string to_tsv() const;

 private:
  std::vector<std::pair<VertexId, std::string>> labels_;  // sorted by id
  std::map<std::string, std::set<VertexId>> token_map_;
};

}  // namespace kg::ingest
