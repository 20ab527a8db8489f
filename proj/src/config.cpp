#include "kg/config.hpp"

#include <json.hpp>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void read_path_if(const nlohmann::json& j, const char* key,
                  std::optional<std::filesystem::path>& into) {
  if (j.contains(key) && !j.at(key).is_null())
    into = std::filesystem::path(j.at(key).get<std::string>());
}

}  // namespace

PipelineConfig PipelineConfig::from_json_file(const std::filesystem::path& p) {
  return from_json(read_file(p));
}

PipelineConfig PipelineConfig::from_json(const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  PipelineConfig c;
  if (!j.contains("seed")) throw UsageError("config: 'seed' is mandatory");
  c.seed = j.at("seed").get<std::uint64_t>();
  read_if(j, "workers", c.workers);
  read_if(j, "k_refut", c.k_refut);
  if (j.contains("multigraph_mode"))
    c.multigraph_mode = virtues::rank_mode_from_string(j.at("multigraph_mode"));

  if (j.contains("paths")) {
    const auto& p = j.at("paths");
    if (p.contains("statements")) c.statements = p.at("statements").get<std::string>();
    read_path_if(p, "task", c.task);
    read_path_if(p, "oracle", c.oracle);
    read_path_if(p, "topic_labels", c.topic_labels);
    read_path_if(p, "pruning", c.pruning);
    if (p.contains("out")) c.out = p.at("out").get<std::string>();
  }

  if (j.contains("npmi")) {
    const auto& n = j.at("npmi");
    if (n.contains("mode")) {
      std::string m = n.at("mode").get<std::string>();
      if (m == "weighted")
        c.npmi_mode = ingest::NpmiMode::weighted;
      else if (m == "counts")
        c.npmi_mode = ingest::NpmiMode::counts;
      else
        throw UsageError("config: npmi.mode must be weighted or counts");
    }
    if (n.contains("filter")) {
      std::string f = n.at("filter").get<std::string>();
      if (f == "above_average_positive")
        c.universe_filter = ingest::UniverseFilter::above_average_positive();
      else if (f == "absolute_threshold")
        c.universe_filter =
            ingest::UniverseFilter::absolute_threshold(n.value("tau", 0.0));
      else
        throw UsageError("config: npmi.filter must be above_average_positive or absolute_threshold");
    }
  }

  if (j.contains("clustering")) {
    const auto& cl = j.at("clustering");
    if (cl.contains("mode")) {
      std::string m = cl.at("mode").get<std::string>();
      if (m == "threshold_clique")
        c.cluster_mode = ClusterMode::threshold_clique;
      else if (m == "kmeans")
        c.cluster_mode = ClusterMode::kmeans;
      else
        throw UsageError("config: clustering.mode must be threshold_clique or kmeans");
    }
    read_if(cl, "tau", c.clique_tau);
    if (cl.contains("kmeans")) {
      const auto& km = cl.at("kmeans");
      read_if(km, "bucket_size", c.kmeans.bucket_size);
      read_if(km, "k_per_bucket", c.kmeans.k_per_bucket);
      read_if(km, "seeds_per_bucket", c.kmeans.seeds_per_bucket);
      read_if(km, "max_iterations", c.kmeans.max_iterations);
      read_if(km, "convergence_tol", c.kmeans.convergence_tol);
    }
  }

  if (j.contains("ga")) {
    const auto& g = j.at("ga");
    read_if(g, "p_m", c.ga.p_m);
    read_if(g, "p_c", c.ga.p_c);
    read_if(g, "k_m", c.ga.k_m);
    read_if(g, "n_generations", c.ga.n_generations);
    read_if(g, "rho_p", c.ga.rho_p);
    read_if(g, "mu_i", c.ga.mu_i);
    read_if(g, "sigma_i", c.ga.sigma_i);
    read_if(g, "initial_population", c.ga.initial_population);
    read_if(g, "early_stop_epsilon", c.ga.early_stop_epsilon);
    read_if(g, "early_stop_window", c.ga.early_stop_window);
  }
  read_if(j, "distance_dense_cutoff", c.distance_dense_cutoff);

  // Derived wiring: the GA shares the pipeline seed, refutability depth and
  // ranking mode unless set explicitly.
  c.ga.rng_seed = c.seed;
  c.kmeans.rng_seed = c.seed;
  c.ga.k_refut = c.k_refut;
  c.ga.multigraph_mode = c.multigraph_mode;
  return c;
}

std::string PipelineConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["workers"] = workers;
  j["k_refut"] = k_refut;
  j["multigraph_mode"] = virtues::to_string(multigraph_mode);
  nlohmann::json paths;
  paths["statements"] = statements.string();
  if (task) paths["task"] = task->string();
  if (oracle) paths["oracle"] = oracle->string();
  if (topic_labels) paths["topic_labels"] = topic_labels->string();
  if (pruning) paths["pruning"] = pruning->string();
  paths["out"] = out.string();
  j["paths"] = paths;
  j["npmi"] = {{"mode", npmi_mode == ingest::NpmiMode::weighted ? "weighted" : "counts"},
               {"filter", universe_filter.kind ==
                                  ingest::UniverseFilter::Kind::above_average_positive
                              ? "above_average_positive"
                              : "absolute_threshold"},
               {"tau", universe_filter.tau}};
  j["clustering"] = {
      {"mode", cluster_mode == ClusterMode::threshold_clique ? "threshold_clique" : "kmeans"},
      {"tau", clique_tau},
      {"kmeans",
       {{"bucket_size", kmeans.bucket_size},
        {"k_per_bucket", kmeans.k_per_bucket},
        {"seeds_per_bucket", kmeans.seeds_per_bucket},
        {"max_iterations", kmeans.max_iterations},
        {"convergence_tol", kmeans.convergence_tol}}}};
  j["ga"] = {{"p_m", ga.p_m},
             {"p_c", ga.p_c},
             {"k_m", ga.k_m},
             {"n_generations", ga.n_generations},
             {"rho_p", ga.rho_p},
             {"mu_i", ga.mu_i},
             {"sigma_i", ga.sigma_i},
             {"initial_population", ga.initial_population},
             {"early_stop_epsilon", ga.early_stop_epsilon},
             {"early_stop_window", ga.early_stop_window}};
  j["distance_dense_cutoff"] = distance_dense_cutoff;
  return j.dump(2) + "\n";
}

}  // namespace kg
