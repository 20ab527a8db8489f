#include "kg/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg::ingest {

std::string ParseResult::report_json() const {
  nlohmann::json j;
  j["total_lines"] = total_lines;
  j["accepted"] = statements.size();
  j["rejected_count"] = rejected.size();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rejected) rows.push_back({{"line", r.line}, {"reason", r.reason}});
  j["rejected"] = rows;
  return j.dump(2) + "\n";
}

ParseResult parse_statements(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++result.total_lines;
    auto fields = split_tsv(line);
    if (fields.size() != 4) {
      result.rejected.push_back({line_no, "expected 4 tab-separated fields, got " +
                                              std::to_string(fields.size())});
      continue;
    }
    std::string a = normalize_term(fields[0]);
    std::string b = normalize_term(fields[1]);
    if (a.empty() || b.empty()) {
      result.rejected.push_back({line_no, "empty term after normalization"});
      continue;
    }
    if (a == b) {
      result.rejected.push_back({line_no, "terms identical after normalization"});
      continue;
    }
    char* end = nullptr;
    double w = std::strtod(fields[2].c_str(), &end);
    if (end == fields[2].c_str() || *end != '\0' || !std::isfinite(w)) {
      result.rejected.push_back({line_no, "unparseable weight"});
      continue;
    }
    if (!(w > 0.0) || w > 1.0) {
      result.rejected.push_back({line_no, "weight outside (0,1]"});
      continue;
    }
    result.statements.push_back({std::move(a), std::move(b), w, fields[3]});
  }
  return result;
}

ParseResult parse_statements_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read statements file: " + path);
  return parse_statements(in);
}

VertexId TermLexicon::intern(const std::string& normalized_term) {
  auto it = ids_.find(normalized_term);
  if (it != ids_.end()) return it->second;
  VertexId id = static_cast<VertexId>(terms_.size());
  terms_.push_back(normalized_term);
  ids_.emplace(normalized_term, id);
  return id;
}

std::optional<VertexId> TermLexicon::id_of(const std::string& normalized_term) const {
  auto it = ids_.find(normalized_term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& TermLexicon::term_of(VertexId id) const {
  if (id >= terms_.size()) throw DataError("unknown term id: " + std::to_string(id));
  return terms_[id];
}

std::string TermLexicon::to_tsv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < terms_.size(); ++i) out << i << "\t" << terms_[i] << "\n";
  return out.str();
}

TermLexicon TermLexicon::from_tsv(const std::string& content) {
  TermLexicon lex;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 2)
      throw DataError("lexicon line " + std::to_string(line_no) + ": expected 2 fields");
    VertexId id = lex.intern(fields[1]);
    if (std::to_string(id) != fields[0])
      throw DataError("lexicon line " + std::to_string(line_no) + ": non-contiguous id");
  }
  return lex;
}

TermLexicon lexicon_from(const std::vector<BaseStatement>& statements) {
  TermLexicon lex;
  for (const auto& s : statements) {
    lex.intern(s.term_a);
    lex.intern(s.term_b);
  }
  return lex;
}

std::vector<PairScore> npmi_scores(const std::vector<BaseStatement>& statements,
                                   TermLexicon& lexicon, NpmiMode mode) {
  if (statements.empty()) throw DataError("npmi: no statements");
  std::map<Edge, double> joint;
  std::unordered_map<VertexId, double> marginal;
  double total = 0.0;
  for (const auto& s : statements) {
    double w = mode == NpmiMode::weighted ? s.distance_weight : 1.0;
    VertexId a = lexicon.intern(s.term_a);
    VertexId b = lexicon.intern(s.term_b);
    joint[Edge::make(a, b)] += w;
    marginal[a] += w;
    marginal[b] += w;
    total += w;
  }
  std::vector<PairScore> out;
  out.reserve(joint.size());
  for (const auto& [pair, mass] : joint) {
    double p_xy = mass / total;
    double score;
    if (p_xy >= 1.0) {
      score = 1.0;  // the pair is the whole corpus
    } else {
      double p_x = marginal[pair.u] / total;
      double p_y = marginal[pair.v] / total;
      score = std::log(p_xy / (p_x * p_y)) / -std::log(p_xy);
    }
    out.push_back({pair, std::clamp(score, -1.0, 1.0)});
  }
  return out;  // map iteration is already pair-sorted
}

UniverseGraph build_universe(const std::vector<PairScore>& scores, UniverseFilter filter) {
  if (scores.empty()) throw DataError("build_universe: no pair scores");
  double threshold;
  if (filter.kind == UniverseFilter::Kind::above_average_positive) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& s : scores)
      if (s.npmi > 0.0) {
        sum += s.npmi;
        ++count;
      }
    if (count == 0) throw DataError("build_universe: no positive npmi scores");
    threshold = sum / static_cast<double>(count);
  } else {
    threshold = filter.tau;
  }
  UniverseGraph u;
  std::size_t kept = 0;
  for (const auto& s : scores) {
    if (filter.kind == UniverseFilter::Kind::above_average_positive && !(s.npmi > 0.0))
      continue;
    if (!(s.npmi > threshold)) continue;
    double w = std::clamp(s.npmi, 1e-9, 1.0);
    u.add_edge(s.pair.u, s.pair.v, w);
    ++kept;
  }
  if (kept == 0) throw DataError("build_universe: empty universe (no score above threshold)");
  u.freeze();
  return u;
}

std::string pair_scores_to_tsv(const std::vector<PairScore>& scores) {
  std::ostringstream out;
  for (const auto& s : scores)
    out << s.pair.u << "\t" << s.pair.v << "\t" << format_double(s.npmi) << "\n";
  return out.str();
}

PruneList PruneList::parse(const std::string& content, const TermLexicon& lexicon) {
  PruneList p;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    char sign = line[0];
    if (sign != '+' && sign != '-')
      throw DataError("prune list line " + std::to_string(line_no) +
                      ": entries must start with '+' or '-'");
    std::string entry = line.substr(1);
    std::set<VertexId>& target = sign == '+' ? p.includes_ : p.excludes_;
    char* end = nullptr;
    unsigned long id = std::strtoul(entry.c_str(), &end, 10);
    if (end != entry.c_str() && *end == '\0') {
      target.insert(static_cast<VertexId>(id));
      continue;
    }
    auto vid = lexicon.id_of(normalize_term(entry));
    if (!vid)
      throw DataError("prune list line " + std::to_string(line_no) + ": unknown term '" +
                      entry + "'");
    target.insert(*vid);
  }
  return p;
}

std::set<VertexId> PruneList::apply(std::set<VertexId> in) const {
  if (!includes_.empty()) {
    std::set<VertexId> kept;
    std::set_intersection(in.begin(), in.end(), includes_.begin(), includes_.end(),
                          std::inserter(kept, kept.begin()));
    in = std::move(kept);
  }
  for (VertexId v : excludes_) in.erase(v);
  return in;
}

FulltextIndex FulltextIndex::build(const TermLexicon& lexicon) {
  FulltextIndex idx;
  idx.labels_.reserve(lexicon.size());
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    VertexId id = static_cast<VertexId>(i);
    const std::string& label = lexicon.terms()[i];
    idx.labels_.emplace_back(id, label);
    for (const std::string& tok : tokenize(label)) idx.token_map_[tok].insert(id);
    idx.token_map_[label].insert(id);  // full form
  }
  return idx;
}

std::set<VertexId> FulltextIndex::lookup(const std::string& query) const {
  std::set<VertexId> out;
  auto toks = tokenize(normalize_term(query));
  if (toks.empty()) return out;
  for (const auto& [id, label] : labels_) {
    bool all = true;
    for (const std::string& t : toks) {
      if (label.find(t) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (all) out.insert(id);
  }
  return out;
}

std::set<VertexId> FulltextIndex::lookup(const std::string& query,
                                         const PruneList& prune) const {
  return prune.apply(lookup(query));
}

std::string FulltextIndex::to_tsv() const {
  std::ostringstream out;
  for (const auto& [tok, ids] : token_map_)
    for (VertexId id : ids) out << tok << "\t" << id << "\n";
  return out.str();
}

}  // namespace kg::ingest
