#include "kg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg::eval {

DiscoveryTask DiscoveryTask::from_json(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  DiscoveryTask t;
  for (const auto& s : j.at("source")) t.source.push_back(s.get<std::string>());
  for (const auto& s : j.at("target")) t.target.push_back(s.get<std::string>());
  for (const auto& item : j.at("intermediates")) {
    Intermediate ic;
    ic.name = item.at("name").get<std::string>();
    for (const auto& f : item.at("forms")) ic.forms.push_back(f.get<std::string>());
    t.intermediates.push_back(std::move(ic));
  }
  t.validate();
  return t;
}

std::string DiscoveryTask::to_json() const {
  nlohmann::json j;
  j["source"] = source;
  j["target"] = target;
  nlohmann::json ics = nlohmann::json::array();
  for (const auto& ic : intermediates) ics.push_back({{"name", ic.name}, {"forms", ic.forms}});
  j["intermediates"] = ics;
  return j.dump(2) + "\n";
}

void DiscoveryTask::validate() const {
  if (source.empty() || target.empty())
    throw DataError("task: source and target must be nonempty");
  std::set<std::string> s, t;
  for (const auto& x : source) s.insert(normalize_term(x));
  for (const auto& x : target) t.insert(normalize_term(x));
  for (const auto& x : s)
    if (t.count(x)) throw DataError("task: source and target terms overlap: '" + x + "'");
}

FrequencyOracle FrequencyOracle::from_tsv(const std::string& content) {
  FrequencyOracle o;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 2)
      throw DataError("oracle line " + std::to_string(line_no) + ": expected 2 fields");
    o.counts_[fields[0]] = std::stoll(fields[1]);
  }
  return o;
}

std::string FrequencyOracle::to_tsv() const {
  std::ostringstream out;
  for (const auto& [k, v] : counts_) out << k << "\t" << v << "\n";
  return out.str();
}

std::string FrequencyOracle::key_for_terms(std::vector<std::string> terms) {
  for (auto& t : terms) t = normalize_term(t);
  std::sort(terms.begin(), terms.end());
  std::string key;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) key.push_back('\x1f');
    key += terms[i];
  }
  return key;
}

std::optional<std::int64_t> FrequencyOracle::count(const std::string& key) const {
  auto it = counts_.find(key);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

void FrequencyOracle::set(const std::string& key, std::int64_t count) {
  counts_[key] = count;
}

Subgraph union_graph(const evolve::GenerationSnapshot& snap) {
  if (snap.population.empty()) throw DataError("union_graph: empty snapshot");
  std::vector<VertexId> verts;
  std::vector<Edge> edges;
  for (const auto& s : snap.population) {
    verts.insert(verts.end(), s.hypothesis.vertices().begin(), s.hypothesis.vertices().end());
    edges.insert(edges.end(), s.hypothesis.edges().begin(), s.hypothesis.edges().end());
  }
  return Subgraph::build(std::move(verts), std::move(edges));
}

std::vector<SolutionGraph> solutions(const Subgraph& population_union,
                                     const std::set<VertexId>& source_vertices,
                                     const std::set<VertexId>& target_vertices,
                                     const DistanceOracle& delta,
                                     const cluster::ClusterLabeling& gamma,
                                     virtues::RankMode mode, int k_refut, int workers) {
  if (source_vertices.empty()) throw DataError("solutions: source resolves to no vertices");
  if (target_vertices.empty()) throw DataError("solutions: target resolves to no vertices");

  // Unordered (source, target) pairs present in the union graph.
  std::set<Edge> pairs;
  for (VertexId s : source_vertices) {
    if (!population_union.has_vertex(s)) continue;
    for (VertexId t : target_vertices) {
      if (s == t || !population_union.has_vertex(t)) continue;
      pairs.insert(Edge::make(s, t));
    }
  }

  std::vector<CanonicalPath> paths;
  for (const Edge& pair : pairs) {
    auto p = shortest_path_between(population_union, delta, pair.u, pair.v);
    if (p) paths.push_back(std::move(*p));
  }
  if (paths.empty()) return {};

  std::vector<Hypothesis> hyps;
  hyps.reserve(paths.size());
  for (const CanonicalPath& p : paths) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < p.verts.size(); ++i)
      edges.push_back(Edge::make(p.verts[i], p.verts[i + 1]));
    hyps.push_back(Hypothesis::create_in(population_union,
                                         {p.verts.begin(), p.verts.end()}, edges));
  }

  virtues::ScoringContext ctx(population_union, gamma, delta, k_refut);
  auto scores = virtues::score_population(hyps, ctx, workers);
  auto ranked = virtues::combined_rank(virtues::build_ranking_multigraph(scores, mode));

  // combined_rank orders by (score, index); refine ties by path length then
  // vertex sequence.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const virtues::RankedHypothesis& a, const virtues::RankedHypothesis& b) {
                     if (a.score != b.score) return a.score > b.score;
                     const auto& pa = paths[a.index].verts;
                     const auto& pb = paths[b.index].verts;
                     if (pa.size() != pb.size()) return pa.size() < pb.size();
                     return pa < pb;
                   });

  std::vector<SolutionGraph> out;
  out.reserve(ranked.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    out.push_back({paths[ranked[r].index], static_cast<int>(r + 1),
                   scores[ranked[r].index], ranked[r].score});
  }
  return out;
}

namespace {

bool interior_hits(const SolutionGraph& sol, const std::set<VertexId>& vertices) {
  for (VertexId v : sol.path.interior())
    if (vertices.count(v)) return true;
  return false;
}

bool contains_any_intermediate(const SolutionGraph& sol,
                               const std::vector<std::set<VertexId>>& resolutions) {
  for (const auto& r : resolutions)
    if (interior_hits(sol, r)) return true;
  return false;
}

}  // namespace

std::optional<int> evd(const std::vector<SolutionGraph>& sols,
                       const std::set<VertexId>& intermediate_vertices) {
  std::optional<int> best;
  for (const auto& s : sols)
    if (interior_hits(s, intermediate_vertices) && (!best || s.rank < *best)) best = s.rank;
  return best;
}

std::optional<double> evd_r(const std::vector<SolutionGraph>& sols,
                            const std::set<VertexId>& intermediate_vertices) {
  double total = static_cast<double>(sols.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& s : sols) {
    if (!interior_hits(s, intermediate_vertices)) continue;
    ++hits;
    sum += (total - static_cast<double>(s.rank) + 1.0) / total;
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

RarityResult rarity(const std::vector<SolutionGraph>& sols,
                    const std::vector<std::set<VertexId>>& intermediate_resolutions,
                    const DistanceOracle& delta, const ingest::TermLexicon& lexicon,
                    const FrequencyOracle& oracle) {
  if (sols.empty()) throw DataError("rarity: empty solution set");

  // Union of per-solution canonical shortest-path sets over the
  // intermediate-containing solutions.
  std::set<std::vector<VertexId>> path_set;
  for (const auto& s : sols) {
    if (!contains_any_intermediate(s, intermediate_resolutions)) continue;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < s.path.verts.size(); ++i)
      edges.push_back(Edge::make(s.path.verts[i], s.path.verts[i + 1]));
    Subgraph g = Subgraph::build({s.path.verts.begin(), s.path.verts.end()}, edges);
    for (const CanonicalPath& p : shortest_paths(g, delta)) path_set.insert(p.verts);
  }
  if (path_set.empty())
    throw DataError("rarity: no solution contains an intermediate");

  std::vector<std::int64_t> counts;
  std::vector<std::string> missing;
  for (const auto& verts : path_set) {
    std::vector<std::string> terms;
    terms.reserve(verts.size());
    for (VertexId v : verts) terms.push_back(lexicon.term_of(v));
    std::string key = FrequencyOracle::key_for_terms(std::move(terms));
    auto c = oracle.count(key);
    if (!c) {
      missing.push_back(key);
      continue;
    }
    counts.push_back(*c);
  }
  if (!missing.empty()) {
    std::string msg = "rarity: oracle is missing " + std::to_string(missing.size()) +
                      " conjunction key(s):";
    for (const auto& k : missing) {
      std::string readable = k;
      std::replace(readable.begin(), readable.end(), '\x1f', '|');
      msg += "\n  " + readable;
    }
    throw DataError(msg);
  }

  RarityResult r;
  r.path_count = counts.size();
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  r.mean = sum / static_cast<double>(counts.size());
  std::sort(counts.begin(), counts.end());
  r.median = counts.size() % 2 == 1
                 ? static_cast<double>(counts[counts.size() / 2])
                 : (static_cast<double>(counts[counts.size() / 2 - 1]) +
                    static_cast<double>(counts[counts.size() / 2])) /
                       2.0;
  r.interestingness = interestingness(r.mean);
  return r;
}

double interestingness(double rarity_value) { return 1.0 / (1.0 + rarity_value); }

TopicCounts topic_counts_from_tsv(const std::string& content) {
  TopicCounts tc;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tsv(line);
    if (fields.size() != 4)
      throw DataError("topic labels line " + std::to_string(line_no) +
                      ": expected `count<TAB>unique<TAB>relevant<TAB>novel`");
    auto flag = [&](const std::string& f) {
      if (f == "1" || f == "y") return true;
      if (f == "0" || f == "n") return false;
      throw DataError("topic labels line " + std::to_string(line_no) + ": bad flag '" + f +
                      "'");
    };
    std::int64_t count = std::stoll(fields[0]);
    bool unique = flag(fields[1]);
    bool relevant = flag(fields[2]);
    bool novel = flag(fields[3]);
    if (novel && !relevant)
      throw DataError("topic labels line " + std::to_string(line_no) +
                      ": novel topic must be relevant");
    tc.all += count;
    tc.unique += unique ? 1 : 0;
    tc.relevant += relevant ? 1 : 0;
    tc.novel += novel ? 1 : 0;
  }
  return tc;
}

TopicScores topic_scores(const TopicCounts& c) {
  if (c.all < 0 || c.unique < 0 || c.relevant < 0 || c.novel < 0)
    throw DataError("topic scores: negative count");
  if (c.unique > c.all || c.relevant > c.unique || c.novel > c.relevant)
    throw DataError("topic scores: inconsistent counts (need novel <= relevant <= unique <= all)");
  TopicScores s;
  if (c.all > 0) s.density = static_cast<double>(c.unique) / static_cast<double>(c.all);
  if (c.unique > 0)
    s.relevance = static_cast<double>(c.relevant) / static_cast<double>(c.unique);
  if (c.relevant > 0)
    s.novelty = static_cast<double>(c.novel) / static_cast<double>(c.relevant);
  return s;
}

std::vector<GenerationMetricsRow> generation_metrics(
    const std::vector<evolve::GenerationSnapshot>& snapshots,
    const std::set<VertexId>& source_vertices, const std::set<VertexId>& target_vertices,
    const std::vector<std::set<VertexId>>& intermediate_resolutions,
    const DistanceOracle& delta, const cluster::ClusterLabeling& gamma,
    virtues::RankMode mode, int k_refut, int workers) {
  if (snapshots.empty()) throw DataError("generation_metrics: no snapshots");
  std::vector<GenerationMetricsRow> rows;
  rows.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    GenerationMetricsRow row;
    row.generation = snap.generation;
    Subgraph uni = union_graph(snap);
    auto sols =
        solutions(uni, source_vertices, target_vertices, delta, gamma, mode, k_refut, workers);
    row.claims_total = sols.size();
    for (const auto& s : sols)
      if (contains_any_intermediate(s, intermediate_resolutions))
        ++row.claims_with_intermediate;
    double sum_all = 0.0, sum_present = 0.0;
    std::size_t present = 0;
    for (const auto& res : intermediate_resolutions) {
      auto r = evd_r(sols, res);
      if (r) {
        sum_all += *r;
        sum_present += *r;
        ++present;
      }
    }
    row.mean_evdr_all = intermediate_resolutions.empty()
                            ? 0.0
                            : sum_all / static_cast<double>(intermediate_resolutions.size());
    row.mean_evdr_present = present == 0 ? 0.0 : sum_present / static_cast<double>(present);
    rows.push_back(row);
  }
  return rows;
}

std::string metrics_to_csv(const std::vector<GenerationMetricsRow>& rows) {
  std::ostringstream out;
  out << "generation,mean_evdr_all,mean_evdr_present,claims_total,claims_with_intermediate\n";
  for (const auto& r : rows)
    out << r.generation << "," << format_double(r.mean_evdr_all) << ","
        << format_double(r.mean_evdr_present) << "," << r.claims_total << ","
        << r.claims_with_intermediate << "\n";
  return out.str();
}

std::size_t best_evdr_generation(const std::vector<GenerationMetricsRow>& rows) {
  if (rows.empty()) throw DataError("best_evdr_generation: no rows");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].mean_evdr_all > rows[best].mean_evdr_all) best = i;
  return best;
}

}  // namespace kg::eval
