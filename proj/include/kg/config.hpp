#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "kg/cluster.hpp"
#include "kg/evolve.hpp"
#include "kg/ingest.hpp"

namespace kg {

/// Whole-pipeline configuration, loaded from a single JSON file. The seed is
/// mandatory: there is no wall-clock fallback, so identical config implies
/// identical outputs.
struct PipelineConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  int k_refut = 1;
  virtues::RankMode multigraph_mode = virtues::RankMode::full_pairwise;

  // Inputs.
  std::filesystem::path statements;
  std::optional<std::filesystem::path> task;
  std::optional<std::filesystem::path> oracle;
  std::optional<std::filesystem::path> topic_labels;
  std::optional<std::filesystem::path> pruning;

  // Output root; stage artifacts live under it at fixed names.
  std::filesystem::path out = "out";

  ingest::NpmiMode npmi_mode = ingest::NpmiMode::weighted;
  ingest::UniverseFilter universe_filter = ingest::UniverseFilter::above_average_positive();

  enum class ClusterMode { threshold_clique, kmeans } cluster_mode = ClusterMode::kmeans;
  double clique_tau = 1.5;
  cluster::KMeansConfig kmeans;

  evolve::GaConfig ga;

  std::size_t distance_dense_cutoff = 10000;

  static PipelineConfig from_json_file(const std::filesystem::path& p);
  static PipelineConfig from_json(const std::string& json);
  std::string to_json() const;

  // Fixed artifact names under `out`.
  std::filesystem::path universe_path() const { return out / "universe.tsv"; }
  std::filesystem::path vertex_labels_path() const { return out / "vertex_labels.tsv"; }
  std::filesystem::path lexicon_path() const { return out / "lexicon.tsv"; }
  std::filesystem::path pair_scores_path() const { return out / "pair_scores.tsv"; }
  std::filesystem::path index_path() const { return out / "index.tsv"; }
  std::filesystem::path rejections_path() const { return out / "rejections.json"; }
  std::filesystem::path labeling_path() const { return out / "labeling.tsv"; }
  std::filesystem::path snapshots_dir() const { return out / "snapshots"; }
  std::filesystem::path resolved_config_path() const { return out / "resolved_config.json"; }
};

}  // namespace kg
