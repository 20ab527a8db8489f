#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kg/cluster.hpp"
#include "kg/context.hpp"
#include "kg/graph.hpp"
#include "kg/ranking.hpp"
#include "kg/rng.hpp"
#include "kg/virtues.hpp"

namespace kg::evolve {

struct GaConfig {
  double p_m = 0.05;         // per-individual mutation probability
  double p_c = 0.75;         // per-attempt mating probability
  int k_m = 5;               // mating attempts per individual per generation
  int n_generations = 50;    // N_G
  double rho_p = 0.05;       // population size deviation rate
  double mu_i = 100.0;       // initial individual size mean
  double sigma_i = 80.0;     // initial individual size standard deviation
  int initial_population = 100;
  int k_refut = 1;
  std::uint64_t rng_seed = 0;
  virtues::RankMode multigraph_mode = virtues::RankMode::full_pairwise;
  // Optional early stop: mean combined score stable within epsilon over the
  // trailing window. Off while epsilon <= 0.
  double early_stop_epsilon = 0.0;
  int early_stop_window = 5;

  void validate() const;  // throws UsageError
};

struct ScoredIndividual {
  Hypothesis hypothesis;
  virtues::VirtueVector virtues;
  double combined_score = 0.0;
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
};

/// One generation, sorted by combined rank (rank 1 first).
struct GenerationSnapshot {
  int generation = 0;
  std::vector<ScoredIndividual> population;
  std::uint64_t rng_digest = 0;
};

/// Hub with degree >= 1 picked uniformly, plus min(size_target-1, degree)
/// random neighbors and the connecting edges. Throws DataError when the
/// universe has no edges.
Hypothesis sample_star(const UniverseGraph& u, std::size_t size_target, Rng& rng);

/// Stars with sizes gauss(mu_i, sigma_i) floored and clamped to >= 2.
std::vector<Hypothesis> init_population(const UniverseGraph& u, const GaConfig& cfg, Rng& rng);

/// Equal-probability edge add (universe edge touching the individual) or
/// edge delete (isolated endpoints dropped). Disconnected or degenerate
/// offspring -> nullopt, parent untouched.
std::optional<Hypothesis> mutate(const Hypothesis& h, const UniverseGraph& u, Rng& rng);

/// ceil(|E|/2) random edges from each parent, merged; vertices induced.
/// Disconnected child -> nullopt.
std::optional<Hypothesis> crossover(const Hypothesis& a, const Hypothesis& b, Rng& rng);

/// Mutation + mating over the input population, parents kept in the pool,
/// pool scored against the full universe, combined-ranked and trimmed to
/// gauss(prev_size, rho_p * prev_size) clamped to >= 1.
GenerationSnapshot step_generation(const std::vector<Hypothesis>& population,
                                   const UniverseGraph& u,
                                   const cluster::ClusterLabeling& gamma,
                                   const DistanceOracle& delta, const GaConfig& cfg, Rng& rng,
                                   int generation_index, int workers = 1);

/// Full run: initial scored snapshot (generation 0) plus n_generations steps.
/// When `persist_dir` is set every snapshot is written as it is produced and
/// the run becomes resumable.
std::vector<GenerationSnapshot> run(const UniverseGraph& u,
                                    const cluster::ClusterLabeling& gamma,
                                    const DistanceOracle& delta, const GaConfig& cfg,
                                    int workers = 1,
                                    const std::optional<std::filesystem::path>& persist_dir =
                                        std::nullopt,
                                    bool resume = false);

/// Snapshot directory layout: gen_NNN/population.tsv (individual, u, v,
/// weight), gen_NNN/scores.json, gen_NNN/state.json; manifest.json at root.
void persist_snapshot(const std::filesystem::path& dir, const GenerationSnapshot& snap,
                      const UniverseGraph& u, const Rng& rng, const GaConfig& cfg);
GenerationSnapshot load_snapshot(const std::filesystem::path& dir, const UniverseGraph& u);
std::optional<int> latest_persisted_generation(const std::filesystem::path& dir);
std::string snapshot_population_tsv(const GenerationSnapshot& snap, const UniverseGraph& u);
std::string snapshot_scores_json(const GenerationSnapshot& snap);

}  // namespace kg::evolve
