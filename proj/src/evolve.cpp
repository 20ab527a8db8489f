#include "kg/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg::evolve {

void GaConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_m) || !prob(p_c)) throw UsageError("ga: probabilities must be in [0,1]");
  if (k_m < 0) throw UsageError("ga: k_m must be >= 0");
  if (n_generations < 1) throw UsageError("ga: n_generations must be >= 1");
  if (!(mu_i > 0.0)) throw UsageError("ga: mu_i must be > 0");
  if (sigma_i < 0.0) throw UsageError("ga: sigma_i must be >= 0");
  if (rho_p < 0.0) throw UsageError("ga: rho_p must be >= 0");
  if (initial_population < 1) throw UsageError("ga: initial_population must be >= 1");
  if (k_refut < 1) throw UsageError("ga: k_refut must be >= 1");
}

namespace {

// gauss draw floored to integer, clamped from below.
std::size_t gauss_size(Rng& rng, double mu, double sigma, std::size_t min_value) {
  double g = rng.gauss(mu, sigma);
  double f = std::floor(g);
  if (f < static_cast<double>(min_value)) return min_value;
  return static_cast<std::size_t>(f);
}

}  // namespace

Hypothesis sample_star(const UniverseGraph& u, std::size_t size_target, Rng& rng) {
  if (size_target < 2) throw UsageError("sample_star: size_target must be >= 2");
  std::vector<VertexId> hubs;
  hubs.reserve(u.vertex_count());
  for (VertexId v : u.vertices())
    if (!u.neighbors(v).empty()) hubs.push_back(v);
  if (hubs.empty()) throw DataError("sample_star: universe has no edges");
  VertexId hub = hubs[rng.below(hubs.size())];

  auto nbrs = u.neighbors(hub);
  std::size_t fan = std::min(size_target - 1, nbrs.size());
  std::vector<VertexId> pool(nbrs.begin(), nbrs.end());
  for (std::size_t i = 0; i < fan; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<VertexId> verts{hub};
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < fan; ++i) {
    verts.push_back(pool[i]);
    edges.push_back(Edge::make(hub, pool[i]));
  }
  return Hypothesis::create(u, std::move(verts), std::move(edges));
}

std::vector<Hypothesis> init_population(const UniverseGraph& u, const GaConfig& cfg,
                                        Rng& rng) {
  cfg.validate();
  std::vector<Hypothesis> pop;
  pop.reserve(cfg.initial_population);
  for (int i = 0; i < cfg.initial_population; ++i) {
    // A star covering the whole universe cannot be scored (the global
    // simplicity ratio needs a nonempty complement); redraw a few times.
    Hypothesis star = sample_star(u, gauss_size(rng, cfg.mu_i, cfg.sigma_i, 2), rng);
    int attempts = 0;
    while (star.vertex_count() == u.vertex_count()) {
      if (++attempts > 64)
        throw DataError("init_population: cannot sample a proper sub-universe star");
      star = sample_star(u, gauss_size(rng, cfg.mu_i, cfg.sigma_i, 2), rng);
    }
    pop.push_back(std::move(star));
  }
  return pop;
}

std::optional<Hypothesis> mutate(const Hypothesis& h, const UniverseGraph& u, Rng& rng) {
  bool add = rng.below(2) == 0;
  if (add) {
    // Universe edges touching the individual and absent from it.
    std::set<Edge> candidates;
    for (VertexId v : h.vertices())
      for (VertexId n : u.neighbors(v)) {
        Edge e = Edge::make(v, n);
        if (!h.has_edge(e.u, e.v)) candidates.insert(e);
      }
    if (candidates.empty()) return std::nullopt;
    auto it = candidates.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.below(candidates.size())));
    std::vector<VertexId> verts(h.vertices().begin(), h.vertices().end());
    std::vector<Edge> edges(h.edges().begin(), h.edges().end());
    verts.push_back(it->u);
    verts.push_back(it->v);
    edges.push_back(*it);
    return Hypothesis::create(u, std::move(verts), std::move(edges));
  }
  // Delete: drop a random edge, then any vertex left isolated.
  if (h.edge_count() <= 1) return std::nullopt;
  std::size_t pick = static_cast<std::size_t>(rng.below(h.edge_count()));
  std::vector<Edge> edges;
  edges.reserve(h.edge_count() - 1);
  for (std::size_t i = 0; i < h.edges().size(); ++i)
    if (i != pick) edges.push_back(h.edges()[i]);
  Subgraph g = Subgraph::build({}, edges);  // isolated vertices drop out
  if (g.vertex_count() < 2 || !is_connected(g)) return std::nullopt;
  std::vector<VertexId> verts(g.vertices().begin(), g.vertices().end());
  return Hypothesis::create(u, std::move(verts), std::move(edges));
}

namespace {

std::vector<Edge> sample_half_edges(std::span<const Edge> edges, Rng& rng) {
  std::size_t take = (edges.size() + 1) / 2;  // ceil
  std::vector<Edge> pool(edges.begin(), edges.end());
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

}  // namespace

std::optional<Hypothesis> crossover(const Hypothesis& a, const Hypothesis& b, Rng& rng) {
  std::vector<Edge> edges = sample_half_edges(a.edges(), rng);
  std::vector<Edge> from_b = sample_half_edges(b.edges(), rng);
  edges.insert(edges.end(), from_b.begin(), from_b.end());
  Subgraph g = Subgraph::build({}, edges);
  if (g.vertex_count() < 2 || g.edge_count() < 1 || !is_connected(g)) return std::nullopt;
  std::vector<VertexId> verts(g.vertices().begin(), g.vertices().end());
  std::vector<Edge> dedup(g.edges().begin(), g.edges().end());
  // Parents are valid, so every edge already exists in the universe; rebuild
  // through create_in-equivalent validation anyway to keep the invariant in
  // one place.
  return std::optional<Hypothesis>(Hypothesis::create_in(g, verts, dedup));
}

GenerationSnapshot step_generation(const std::vector<Hypothesis>& population,
                                   const UniverseGraph& u,
                                   const cluster::ClusterLabeling& gamma,
                                   const DistanceOracle& delta, const GaConfig& cfg, Rng& rng,
                                   int generation_index, int workers) {
  if (population.empty()) throw DataError("step_generation: empty population");
  std::vector<Hypothesis> pool = population;
  // Validation also drops offspring covering every universe vertex: the
  // global simplicity ratio is undefined for them.
  auto admit = [&](std::optional<Hypothesis> child) {
    if (child && child->vertex_count() < u.vertex_count())
      pool.push_back(std::move(*child));
  };

  // Mutation pass: offspring coexist with their parents in the pool.
  for (const Hypothesis& h : population) {
    if (!rng.chance(cfg.p_m)) continue;
    admit(mutate(h, u, rng));
  }

  // Mating pass: each individual attempts up to k_m matings against uniform
  // partners (no self-pairing).
  if (population.size() > 1) {
    for (std::size_t i = 0; i < population.size(); ++i) {
      for (int attempt = 0; attempt < cfg.k_m; ++attempt) {
        if (!rng.chance(cfg.p_c)) continue;
        std::size_t j = static_cast<std::size_t>(rng.below(population.size() - 1));
        if (j >= i) ++j;
        admit(crossover(population[i], population[j], rng));
      }
    }
  }

  virtues::ScoringContext ctx(u.topology(), gamma, delta, cfg.k_refut);
  auto scores = virtues::score_population(pool, ctx, workers);
  auto ranked = virtues::combined_rank(
      virtues::build_ranking_multigraph(scores, cfg.multigraph_mode));

  std::size_t target =
      gauss_size(rng, static_cast<double>(population.size()),
                 cfg.rho_p * static_cast<double>(population.size()), 1);
  target = std::min(target, ranked.size());

  // Trim by pool rank, then re-rank the survivors among themselves so the
  // stored scores describe the emitted population.
  std::vector<std::size_t> kept;
  kept.reserve(target);
  for (std::size_t r = 0; r < target; ++r) kept.push_back(ranked[r].index);
  std::vector<virtues::VirtueVector> kept_scores;
  kept_scores.reserve(target);
  for (std::size_t i : kept) kept_scores.push_back(scores[i]);
  auto final_rank = virtues::combined_rank(
      virtues::build_ranking_multigraph(kept_scores, cfg.multigraph_mode));

  GenerationSnapshot snap;
  snap.generation = generation_index;
  snap.population.reserve(target);
  for (const auto& item : final_rank) {
    std::size_t pool_index = kept[item.index];
    snap.population.push_back({pool[pool_index], scores[pool_index], item.score,
                               item.in_degree, item.out_degree});
  }
  snap.rng_digest = rng.state_digest();
  return snap;
}

namespace {

GenerationSnapshot score_only_snapshot(const std::vector<Hypothesis>& population,
                                       const UniverseGraph& u,
                                       const cluster::ClusterLabeling& gamma,
                                       const DistanceOracle& delta, const GaConfig& cfg,
                                       const Rng& rng, int generation_index, int workers) {
  virtues::ScoringContext ctx(u.topology(), gamma, delta, cfg.k_refut);
  auto scores = virtues::score_population(population, ctx, workers);
  auto ranked = virtues::combined_rank(
      virtues::build_ranking_multigraph(scores, cfg.multigraph_mode));
  GenerationSnapshot snap;
  snap.generation = generation_index;
  for (const auto& item : ranked)
    snap.population.push_back({population[item.index], scores[item.index], item.score,
                               item.in_degree, item.out_degree});
  snap.rng_digest = rng.state_digest();
  return snap;
}

std::vector<Hypothesis> population_of(const GenerationSnapshot& snap) {
  std::vector<Hypothesis> pop;
  pop.reserve(snap.population.size());
  for (const auto& s : snap.population) pop.push_back(s.hypothesis);
  return pop;
}

double mean_combined(const GenerationSnapshot& snap) {
  if (snap.population.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : snap.population) sum += s.combined_score;
  return sum / static_cast<double>(snap.population.size());
}

std::filesystem::path gen_dir(const std::filesystem::path& root, int generation) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "gen_%03d", generation);
  return root / buf;
}

}  // namespace

std::vector<GenerationSnapshot> run(const UniverseGraph& u,
                                    const cluster::ClusterLabeling& gamma,
                                    const DistanceOracle& delta, const GaConfig& cfg,
                                    int workers,
                                    const std::optional<std::filesystem::path>& persist_dir,
                                    bool resume) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  std::vector<GenerationSnapshot> snapshots;
  int start_gen = 0;

  if (resume && persist_dir) {
    if (auto latest = latest_persisted_generation(*persist_dir)) {
      for (int g = 0; g <= *latest; ++g)
        snapshots.push_back(load_snapshot(gen_dir(*persist_dir, g), u));
      nlohmann::json state = nlohmann::json::parse(
          read_file(gen_dir(*persist_dir, *latest) / "state.json"));
      rng.restore(state.at("rng").get<std::string>());
      start_gen = *latest + 1;
    }
  }

  if (start_gen == 0) {
    auto pop = init_population(u, cfg, rng);
    snapshots.push_back(score_only_snapshot(pop, u, gamma, delta, cfg, rng, 0, workers));
    if (persist_dir) persist_snapshot(gen_dir(*persist_dir, 0), snapshots.back(), u, rng, cfg);
    start_gen = 1;
  }

  for (int g = start_gen; g <= cfg.n_generations; ++g) {
    auto pop = population_of(snapshots.back());
    snapshots.push_back(step_generation(pop, u, gamma, delta, cfg, rng, g, workers));
    if (persist_dir)
      persist_snapshot(gen_dir(*persist_dir, g), snapshots.back(), u, rng, cfg);

    if (cfg.early_stop_epsilon > 0.0 &&
        static_cast<int>(snapshots.size()) > cfg.early_stop_window) {
      double lo = mean_combined(snapshots.back());
      double hi = lo;
      for (int w = 0; w < cfg.early_stop_window; ++w) {
        double m = mean_combined(snapshots[snapshots.size() - 1 - w]);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      if (hi - lo <= cfg.early_stop_epsilon) break;
    }
  }
  return snapshots;
}

std::string snapshot_population_tsv(const GenerationSnapshot& snap, const UniverseGraph& u) {
  std::ostringstream out;
  for (std::size_t i = 0; i < snap.population.size(); ++i)
    for (const Edge& e : snap.population[i].hypothesis.edges())
      out << i << "\t" << e.u << "\t" << e.v << "\t"
          << format_double(u.edge_weight(e.u, e.v)) << "\n";
  return out.str();
}

std::string snapshot_scores_json(const GenerationSnapshot& snap) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < snap.population.size(); ++i) {
    const auto& s = snap.population[i];
    nlohmann::json j;
    j["rank"] = i + 1;
    j["combined_score"] = s.combined_score;
    j["in_degree"] = s.in_degree;
    j["out_degree"] = s.out_degree;
    j["vertices"] = s.hypothesis.vertex_count();
    j["edges"] = s.hypothesis.edge_count();
    j["virtues"] = nlohmann::json::parse(s.virtues.to_json());
    rows.push_back(j);
  }
  nlohmann::json top;
  top["generation"] = snap.generation;
  top["population_size"] = snap.population.size();
  top["rng_digest"] = snap.rng_digest;
  top["individuals"] = rows;
  return top.dump(2) + "\n";
}

void persist_snapshot(const std::filesystem::path& dir, const GenerationSnapshot& snap,
                      const UniverseGraph& u, const Rng& rng, const GaConfig& cfg) {
  std::filesystem::create_directories(dir);
  std::string pop_tsv = snapshot_population_tsv(snap, u);
  std::string scores = snapshot_scores_json(snap);
  write_file_atomic(dir / "population.tsv", pop_tsv);
  write_file_atomic(dir / "scores.json", scores);
  nlohmann::json state;
  state["generation"] = snap.generation;
  state["rng"] = rng.state();
  write_file_atomic(dir / "state.json", state.dump(2) + "\n");

  // Manifest at the snapshot root: config, seed and per-generation digests.
  std::filesystem::path root = dir.parent_path();
  nlohmann::json manifest;
  std::filesystem::path manifest_path = root / "manifest.json";
  if (std::filesystem::exists(manifest_path))
    manifest = nlohmann::json::parse(read_file(manifest_path));
  manifest["seed"] = cfg.rng_seed;
  manifest["config"] = {{"p_m", cfg.p_m},
                        {"p_c", cfg.p_c},
                        {"k_m", cfg.k_m},
                        {"n_generations", cfg.n_generations},
                        {"rho_p", cfg.rho_p},
                        {"mu_i", cfg.mu_i},
                        {"sigma_i", cfg.sigma_i},
                        {"initial_population", cfg.initial_population},
                        {"k_refut", cfg.k_refut},
                        {"multigraph_mode", virtues::to_string(cfg.multigraph_mode)}};
  char key[16];
  std::snprintf(key, sizeof key, "gen_%03d", snap.generation);
  manifest["generations"][key] = {{"population_digest", fnv1a(pop_tsv)},
                                  {"scores_digest", fnv1a(scores)}};
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
}

GenerationSnapshot load_snapshot(const std::filesystem::path& dir, const UniverseGraph& u) {
  GenerationSnapshot snap;
  nlohmann::json scores = nlohmann::json::parse(read_file(dir / "scores.json"));
  snap.generation = scores.at("generation").get<int>();
  snap.rng_digest = scores.at("rng_digest").get<std::uint64_t>();

  std::map<std::size_t, std::vector<Edge>> edges_by_individual;
  std::istringstream in(read_file(dir / "population.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 4) throw DataError("population.tsv: expected 4 fields");
    std::size_t idx = std::stoull(fields[0]);
    edges_by_individual[idx].push_back(
        Edge::make(static_cast<VertexId>(std::stoul(fields[1])),
                   static_cast<VertexId>(std::stoul(fields[2]))));
  }

  const auto& rows = scores.at("individuals");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = edges_by_individual.find(i);
    if (it == edges_by_individual.end())
      throw DataError("population.tsv: missing edges for individual " + std::to_string(i));
    std::vector<VertexId> verts;
    for (const Edge& e : it->second) {
      verts.push_back(e.u);
      verts.push_back(e.v);
    }
    ScoredIndividual s{Hypothesis::create(u, std::move(verts), it->second),
                       virtues::VirtueVector::from_json(rows[i].at("virtues").dump()),
                       rows[i].at("combined_score").get<double>(),
                       rows[i].at("in_degree").get<std::size_t>(),
                       rows[i].at("out_degree").get<std::size_t>()};
    snap.population.push_back(std::move(s));
  }
  return snap;
}

std::optional<int> latest_persisted_generation(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) return std::nullopt;
  std::optional<int> latest;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind("gen_", 0) != 0) continue;
    if (!std::filesystem::exists(entry.path() / "state.json")) continue;
    int g = std::atoi(name.c_str() + 4);
    if (!latest || g > *latest) latest = g;
  }
  return latest;
}

}  // namespace kg::evolve
