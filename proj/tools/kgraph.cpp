// kgraph: build, cluster, refine, rank, evaluate and inspect co-occurrence
// knowledge graphs with hypothesis-virtue scoring.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kg/config.hpp"
#include "kg/context.hpp"
#include "kg/error.hpp"
#include "kg/eval.hpp"
#include "kg/evolve.hpp"
#include "kg/graph_io.hpp"
#include "kg/ingest.hpp"
#include "kg/stats.hpp"
#include "kg/util.hpp"

namespace fs = std::filesystem;
using namespace kg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

PipelineConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) throw UsageError("--config is required");
  PipelineConfig cfg = PipelineConfig::from_json_file(args.config_path);
  if (args.seed) {
    cfg.seed = *args.seed;
    cfg.ga.rng_seed = *args.seed;
    cfg.kmeans.rng_seed = *args.seed;
  }
  if (args.workers) cfg.workers = *args.workers;
  if (args.out) cfg.out = *args.out;
  return cfg;
}

void require_artifact(const fs::path& p, const std::string& producing_stage) {
  if (!fs::exists(p))
    throw DataError("missing artifact " + p.string() + " (run `" + producing_stage +
                    "` first)");
}

void write_resolved_config(const PipelineConfig& cfg) {
  write_file_atomic(cfg.resolved_config_path(), cfg.to_json());
}

struct LoadedUniverse {
  UniverseGraph universe;
  ingest::TermLexicon lexicon;
  ContextVectors cv;
  std::optional<DistanceOracle> delta;
};

LoadedUniverse load_universe_stage(const PipelineConfig& cfg) {
  require_artifact(cfg.universe_path(), "build");
  require_artifact(cfg.lexicon_path(), "build");
  LoadedUniverse l;
  l.universe = load_universe(cfg.universe_path());
  if (fs::exists(cfg.vertex_labels_path()))
    apply_vertex_labels_tsv(l.universe, read_file(cfg.vertex_labels_path()));
  l.lexicon = ingest::TermLexicon::from_tsv(read_file(cfg.lexicon_path()));
  l.cv = build_context_vectors(l.universe);
  l.delta.emplace(l.cv, cfg.distance_dense_cutoff);
  return l;
}

int cmd_build(const CommonArgs& args) {
  PipelineConfig cfg = load_config(args);
  auto parsed = ingest::parse_statements_file(cfg.statements.string());
  if (parsed.statements.empty())
    throw DataError("no statements in " + cfg.statements.string());
  ingest::TermLexicon lexicon = ingest::lexicon_from(parsed.statements);
  auto scores = ingest::npmi_scores(parsed.statements, lexicon, cfg.npmi_mode);
  UniverseGraph universe = ingest::build_universe(scores, cfg.universe_filter);
  for (VertexId v : universe.vertices())
    universe.set_vertex_label("term", v, lexicon.term_of(v));
  auto index = ingest::FulltextIndex::build(lexicon);

  write_file_atomic(cfg.universe_path(), universe_to_tsv(universe));
  write_file_atomic(cfg.vertex_labels_path(), vertex_labels_to_tsv(universe));
  write_file_atomic(cfg.lexicon_path(), lexicon.to_tsv());
  write_file_atomic(cfg.pair_scores_path(), ingest::pair_scores_to_tsv(scores));
  write_file_atomic(cfg.index_path(), index.to_tsv());
  write_file_atomic(cfg.rejections_path(), parsed.report_json());
  write_resolved_config(cfg);

  std::cout << "build: " << parsed.statements.size() << " statements ("
            << parsed.rejected.size() << " rejected), " << scores.size() << " pairs, "
            << universe.vertex_count() << " vertices / " << universe.edge_count()
            << " edges kept\n";
  return kExitOk;
}

int cmd_cluster(const CommonArgs& args) {
  PipelineConfig cfg = load_config(args);
  LoadedUniverse l = load_universe_stage(cfg);
  cluster::ClusterLabeling labeling;
  if (cfg.cluster_mode == PipelineConfig::ClusterMode::threshold_clique) {
    std::vector<VertexId> verts(l.universe.vertices().begin(), l.universe.vertices().end());
    labeling = cluster::threshold_clique_clusters(*l.delta, verts, cfg.clique_tau);
  } else {
    labeling = cluster::bucketed_kmeans(l.cv, cfg.kmeans);
  }
  write_file_atomic(cfg.labeling_path(), labeling.to_tsv());
  write_resolved_config(cfg);
  std::cout << "cluster: " << labeling.label_count() << " clusters over "
            << l.universe.vertex_count() << " vertices\n";
  return kExitOk;
}

int cmd_refine(const CommonArgs& args, bool resume) {
  PipelineConfig cfg = load_config(args);
  LoadedUniverse l = load_universe_stage(cfg);
  require_artifact(cfg.labeling_path(), "cluster");
  auto labeling = cluster::ClusterLabeling::from_tsv(read_file(cfg.labeling_path()));
  auto snapshots = evolve::run(l.universe, labeling, *l.delta, cfg.ga, cfg.workers,
                               cfg.snapshots_dir(), resume);
  write_resolved_config(cfg);
  std::cout << "refine: " << snapshots.size() << " snapshots in "
            << cfg.snapshots_dir().string() << ", final population "
            << snapshots.back().population.size() << "\n";
  return kExitOk;
}

std::vector<evolve::GenerationSnapshot> load_all_snapshots(const PipelineConfig& cfg,
                                                           const UniverseGraph& u) {
  auto latest = evolve::latest_persisted_generation(cfg.snapshots_dir());
  if (!latest) throw DataError("missing artifact " + cfg.snapshots_dir().string() +
                               " (run `refine` first)");
  std::vector<evolve::GenerationSnapshot> snaps;
  for (int g = 0; g <= *latest; ++g) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "gen_%03d", g);
    snaps.push_back(evolve::load_snapshot(cfg.snapshots_dir() / buf, u));
  }
  return snaps;
}

int cmd_rank(const CommonArgs& args, int generation) {
  PipelineConfig cfg = load_config(args);
  LoadedUniverse l = load_universe_stage(cfg);
  auto snaps = load_all_snapshots(cfg, l.universe);
  if (generation < 0) generation = snaps.back().generation;
  if (generation >= static_cast<int>(snaps.size()))
    throw DataError("no snapshot for generation " + std::to_string(generation));
  const auto& snap = snaps[generation];

  // Re-rank from the stored virtue vectors.
  std::vector<virtues::VirtueVector> vv;
  for (const auto& s : snap.population) vv.push_back(s.virtues);
  auto ranked =
      virtues::combined_rank(virtues::build_ranking_multigraph(vv, cfg.multigraph_mode));
  std::ostringstream out;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& v = vv[ranked[r].index];
    out << (r + 1) << "\t" << ranked[r].index << "\t" << format_double(ranked[r].score)
        << "\t" << format_double(v.conservatism) << "," << format_double(v.modesty) << ","
        << format_double(v.simplicity_local) << "," << format_double(v.simplicity_global)
        << "," << v.generality << "," << format_double(v.refutability) << "\n";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "ranking_gen_%03d.tsv", generation);
  write_file_atomic(cfg.out / buf, out.str());
  write_resolved_config(cfg);
  std::cout << "rank: wrote " << (cfg.out / buf).string() << " (" << ranked.size()
            << " individuals)\n";
  return kExitOk;
}

struct ResolvedTask {
  eval::DiscoveryTask task;
  std::set<VertexId> source;
  std::set<VertexId> target;
  std::vector<std::set<VertexId>> intermediates;  // aligned with task.intermediates
};

ResolvedTask resolve_task(const PipelineConfig& cfg, const ingest::TermLexicon& lexicon) {
  if (!cfg.task) throw UsageError("config: paths.task is required for evaluate");
  ResolvedTask rt;
  rt.task = eval::DiscoveryTask::from_json(read_file(*cfg.task));
  auto index = ingest::FulltextIndex::build(lexicon);
  ingest::PruneList prune;
  if (cfg.pruning && fs::exists(*cfg.pruning))
    prune = ingest::PruneList::parse(read_file(*cfg.pruning), lexicon);
  auto resolve = [&](const std::vector<std::string>& forms) {
    std::set<VertexId> out;
    for (const auto& f : forms) {
      auto hits = index.lookup(f, prune);
      out.insert(hits.begin(), hits.end());
    }
    return out;
  };
  rt.source = resolve(rt.task.source);
  rt.target = resolve(rt.task.target);
  if (rt.source.empty()) throw DataError("task: source terms resolve to no vertices");
  if (rt.target.empty()) throw DataError("task: target terms resolve to no vertices");
  for (const auto& ic : rt.task.intermediates) rt.intermediates.push_back(resolve(ic.forms));
  return rt;
}

int cmd_evaluate(const CommonArgs& args, const std::string& generation_selector) {
  PipelineConfig cfg = load_config(args);
  LoadedUniverse l = load_universe_stage(cfg);
  auto snaps = load_all_snapshots(cfg, l.universe);
  require_artifact(cfg.labeling_path(), "cluster");
  auto labeling = cluster::ClusterLabeling::from_tsv(read_file(cfg.labeling_path()));
  ResolvedTask rt = resolve_task(cfg, l.lexicon);

  auto metrics =
      eval::generation_metrics(snaps, rt.source, rt.target, rt.intermediates, *l.delta,
                               labeling, cfg.multigraph_mode, cfg.k_refut, cfg.workers);
  write_file_atomic(cfg.out / "metrics.csv", eval::metrics_to_csv(metrics));

  std::size_t selected;
  if (generation_selector == "best-evdr") {
    selected = eval::best_evdr_generation(metrics);
  } else {
    int g;
    try {
      g = std::stoi(generation_selector);
    } catch (const std::exception&) {
      throw UsageError("--generation must be an index or 'best-evdr', got '" +
                       generation_selector + "'");
    }
    if (g < 0 || g >= static_cast<int>(snaps.size()))
      throw DataError("no snapshot for generation " + generation_selector);
    selected = static_cast<std::size_t>(g);
  }

  Subgraph uni = eval::union_graph(snaps[selected]);
  auto sols = eval::solutions(uni, rt.source, rt.target, *l.delta, labeling,
                              cfg.multigraph_mode, cfg.k_refut, cfg.workers);

  std::ostringstream sol_out;
  for (const auto& s : sols) {
    sol_out << s.rank << "\t";
    for (std::size_t i = 0; i < s.path.verts.size(); ++i) {
      if (i) sol_out << "-";
      sol_out << s.path.verts[i];
    }
    sol_out << "\t";
    for (std::size_t i = 0; i < s.path.verts.size(); ++i) {
      if (i) sol_out << "|";
      sol_out << l.lexicon.term_of(s.path.verts[i]);
    }
    const auto& v = s.virtues;
    sol_out << "\t" << format_double(s.combined_score) << "\t" << format_double(v.conservatism)
            << "," << format_double(v.modesty) << "," << format_double(v.simplicity_local)
            << "," << format_double(v.simplicity_global) << "," << v.generality << ","
            << format_double(v.refutability) << "\n";
  }
  write_file_atomic(cfg.out / "solutions.tsv", sol_out.str());

  std::ostringstream evidence;
  for (std::size_t i = 0; i < rt.task.intermediates.size(); ++i) {
    auto e = eval::evd(sols, rt.intermediates[i]);
    auto er = eval::evd_r(sols, rt.intermediates[i]);
    std::size_t hits = 0;
    for (const auto& s : sols) {
      for (VertexId v : s.path.interior())
        if (rt.intermediates[i].count(v)) {
          ++hits;
          break;
        }
    }
    evidence << rt.task.intermediates[i].name << "\t" << (e ? std::to_string(*e) : "-")
             << "\t" << (er ? format_double(*er) : "-") << "\t" << hits << "\n";
  }
  write_file_atomic(cfg.out / "evidence.tsv", evidence.str());

  if (cfg.oracle) {
    require_artifact(*cfg.oracle, "oracle preparation");
    auto oracle = eval::FrequencyOracle::from_tsv(read_file(*cfg.oracle));
    auto rar = eval::rarity(sols, rt.intermediates, *l.delta, l.lexicon, oracle);
    std::ostringstream freq;
    freq << "rarity_mean\t" << format_double(rar.mean) << "\n";
    freq << "rarity_median\t" << format_double(rar.median) << "\n";
    freq << "interestingness\t" << format_double(rar.interestingness) << "\n";
    freq << "paths\t" << rar.path_count << "\n";
    write_file_atomic(cfg.out / "frequency.tsv", freq.str());
  }

  if (cfg.topic_labels) {
    require_artifact(*cfg.topic_labels, "topic labeling");
    auto counts = eval::topic_counts_from_tsv(read_file(*cfg.topic_labels));
    auto scores = eval::topic_scores(counts);
    std::ostringstream topics;
    auto cell = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string("-");
    };
    topics << "top_d\t" << cell(scores.density) << "\n";
    topics << "top_r\t" << cell(scores.relevance) << "\n";
    topics << "top_n\t" << cell(scores.novelty) << "\n";
    write_file_atomic(cfg.out / "topics.tsv", topics.str());
  }

  write_resolved_config(cfg);
  std::cout << "evaluate: generation " << snaps[selected].generation << " (" << sols.size()
            << " solutions), metrics for " << metrics.size() << " generations\n";
  return kExitOk;
}

int cmd_stats(const CommonArgs& args, const std::string& graph_path) {
  PipelineConfig cfg = load_config(args);
  fs::path target = graph_path.empty() ? cfg.universe_path() : fs::path(graph_path);
  require_artifact(target, "build");
  UniverseGraph g = load_universe(target);
  ContextVectors cv = build_context_vectors(g);
  DistanceOracle delta(cv, cfg.distance_dense_cutoff);
  auto s = graph_stats(g.topology(), delta);
  write_file_atomic(cfg.out / "stats.tsv", stats_to_tsv(s));
  write_file_atomic(cfg.out / "stats.json", stats_to_json(s));
  write_resolved_config(cfg);
  std::cout << stats_to_tsv(s);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-occurrence knowledge graph pipeline"};
  app.require_subcommand(1);

  CommonArgs common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "pipeline config JSON")->required();
    cmd->add_option("--seed", common.seed, "override the config seed");
    cmd->add_option("--workers", common.workers, "override the worker count");
    cmd->add_option("--out", common.out, "override the output directory");
  };

  auto* build = app.add_subcommand("build", "statements -> universe, lexicon, index");
  add_common(build);

  auto* cluster_cmd = app.add_subcommand("cluster", "universe -> vertex cluster labeling");
  add_common(cluster_cmd);

  bool resume = false;
  auto* refine = app.add_subcommand("refine", "evolutionary refinement of the universe");
  add_common(refine);
  refine->add_flag("--resume", resume, "continue from the latest persisted generation");

  int rank_generation = -1;
  auto* rank = app.add_subcommand("rank", "write the ranking of one snapshot");
  add_common(rank);
  rank->add_option("--generation", rank_generation, "generation index (default: latest)");

  std::string generation_selector = "best-evdr";
  auto* evaluate = app.add_subcommand("evaluate", "discovery-task evaluation of a run");
  add_common(evaluate);
  evaluate->add_option("--generation", generation_selector,
                       "generation index or 'best-evdr'");

  std::string graph_path;
  auto* stats = app.add_subcommand("stats", "descriptive statistics of a graph");
  add_common(stats);
  stats->add_option("--graph", graph_path, "edge TSV (default: the built universe)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build(common);
    if (cluster_cmd->parsed()) return cmd_cluster(common);
    if (refine->parsed()) return cmd_refine(common, resume);
    if (rank->parsed()) return cmd_rank(common, rank_generation);
    if (evaluate->parsed()) return cmd_evaluate(common, generation_selector);
    if (stats->parsed()) return cmd_stats(common, graph_path);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
