#include "kg/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "kg/error.hpp"
#include "kg/rng.hpp"
#include "kg/util.hpp"

namespace kg::cluster {

LabelId ClusterLabeling::intern(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  LabelId id = static_cast<LabelId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

void ClusterLabeling::add(VertexId v, LabelId l) {
  auto& labels = membership_[v];
  auto it = std::lower_bound(labels.begin(), labels.end(), l);
  if (it == labels.end() || *it != l) labels.insert(it, l);
}

void ClusterLabeling::ensure_vertex(VertexId v) { membership_[v]; }

std::span<const LabelId> ClusterLabeling::labels_of(VertexId v) const {
  auto it = membership_.find(v);
  if (it == membership_.end()) return {};
  return it->second;
}

std::string ClusterLabeling::to_tsv() const {
  std::vector<std::pair<VertexId, std::string>> rows;
  for (const auto& [v, labels] : membership_)
    for (LabelId l : labels) rows.emplace_back(v, names_[l]);
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  for (const auto& [v, name] : rows) out << v << "\t" << name << "\n";
  return out.str();
}

ClusterLabeling ClusterLabeling::from_tsv(const std::string& content) {
  ClusterLabeling g;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 2)
      throw DataError("labeling line " + std::to_string(line_no) + ": expected 2 fields");
    char* end = nullptr;
    unsigned long v = std::strtoul(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0')
      throw DataError("labeling line " + std::to_string(line_no) + ": bad vertex id");
    g.add(static_cast<VertexId>(v), g.intern(fields[1]));
  }
  return g;
}

namespace {

// Bron-Kerbosch with pivoting over index sets. Adjacency as bit rows keeps
// the set algebra simple; this mode only targets small graphs.
void bron_kerbosch(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t>& R,
                   std::vector<std::size_t> P, std::vector<std::size_t> X,
                   std::vector<std::vector<std::size_t>>& cliques) {
  if (P.empty() && X.empty()) {
    cliques.push_back(R);
    return;
  }
  // Pivot: vertex of P united X with most neighbors in P, smallest index on ties.
  std::size_t pivot = 0;
  std::size_t best = 0;
  bool have = false;
  auto consider = [&](std::size_t u) {
    std::size_t count = 0;
    for (std::size_t p : P)
      if (adj[u][p]) ++count;
    if (!have || count > best) {
      have = true;
      best = count;
      pivot = u;
    }
  };
  for (std::size_t u : P) consider(u);
  for (std::size_t u : X) consider(u);

  std::vector<std::size_t> candidates;
  for (std::size_t v : P)
    if (!adj[pivot][v]) candidates.push_back(v);

  for (std::size_t v : candidates) {
    std::vector<std::size_t> P2, X2;
    for (std::size_t p : P)
      if (adj[v][p]) P2.push_back(p);
    for (std::size_t x : X)
      if (adj[v][x]) X2.push_back(x);
    R.push_back(v);
    bron_kerbosch(adj, R, std::move(P2), std::move(X2), cliques);
    R.pop_back();
    P.erase(std::find(P.begin(), P.end(), v));
    X.push_back(v);
  }
}

}  // namespace

ClusterLabeling threshold_clique_clusters(const DistanceOracle& delta,
                                          std::span<const VertexId> vertices, double tau) {
  std::vector<VertexId> ids(vertices.begin(), vertices.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::size_t n = ids.size();

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (delta(ids[i], ids[j]) < tau) adj[i][j] = adj[j][i] = true;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> R;
  bron_kerbosch(adj, R, all, {}, cliques);

  std::vector<std::vector<VertexId>> members;
  members.reserve(cliques.size());
  for (auto& c : cliques) {
    std::vector<VertexId> m;
    m.reserve(c.size());
    for (std::size_t i : c) m.push_back(ids[i]);
    std::sort(m.begin(), m.end());
    members.push_back(std::move(m));
  }
  std::sort(members.begin(), members.end());

  ClusterLabeling out;
  for (VertexId v : ids) out.ensure_vertex(v);
  for (std::size_t c = 0; c < members.size(); ++c) {
    LabelId l = out.intern("c" + std::to_string(c));
    for (VertexId v : members[c]) out.add(v, l);
  }
  return out;
}

namespace {

double sq_dist_to_centroid(std::span<const ContextVectors::Entry> row,
                           const std::vector<double>& centroid, double centroid_sq,
                           const std::unordered_map<VertexId, std::size_t>& dim_pos) {
  // ||x - c||^2 = ||c||^2 - 2 x.c + ||x||^2
  double dot = 0.0, x_sq = 0.0;
  for (const auto& [dim, val] : row) {
    auto it = dim_pos.find(dim);
    if (it != dim_pos.end()) dot += val * centroid[it->second];
    x_sq += val * val;
  }
  return centroid_sq - 2.0 * dot + x_sq;
}

}  // namespace

ClusterLabeling bucketed_kmeans(const ContextVectors& cv, const KMeansConfig& cfg) {
  if (cv.dimension() == 0) throw DataError("bucketed_kmeans: no vectors");
  if (cfg.k_per_bucket < 1) throw UsageError("bucketed_kmeans: k_per_bucket must be >= 1");
  if (cfg.seeds_per_bucket >= cfg.bucket_size)
    throw UsageError("bucketed_kmeans: seeds_per_bucket must be < bucket_size");

  std::vector<VertexId> ids = cv.vertex_ids();
  std::unordered_map<VertexId, std::size_t> dim_pos;
  dim_pos.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) dim_pos[ids[i]] = i;
  std::size_t dim = ids.size();

  Rng rng(cfg.rng_seed);
  std::vector<VertexId> unassigned = ids;
  std::vector<std::vector<VertexId>> buckets;

  while (!unassigned.empty()) {
    if (unassigned.size() <= cfg.seeds_per_bucket ||
        unassigned.size() <= cfg.bucket_size) {
      buckets.push_back(std::move(unassigned));
      unassigned.clear();
      break;
    }
    // Draw seeds without replacement (partial Fisher-Yates on the tail).
    std::vector<VertexId> pool = unassigned;
    for (std::size_t i = 0; i < cfg.seeds_per_bucket; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<VertexId> seeds(pool.begin(), pool.begin() + cfg.seeds_per_bucket);

    std::vector<double> centroid(dim, 0.0);
    for (VertexId s : seeds)
      for (const auto& [d, v] : cv.row(s)) centroid[dim_pos[d]] += v;
    for (double& c : centroid) c /= static_cast<double>(seeds.size());
    double centroid_sq = 0.0;
    for (double c : centroid) centroid_sq += c * c;

    std::vector<VertexId> rest(pool.begin() + cfg.seeds_per_bucket, pool.end());
    std::sort(rest.begin(), rest.end());
    std::vector<std::pair<double, VertexId>> by_dist;
    by_dist.reserve(rest.size());
    for (VertexId v : rest)
      by_dist.emplace_back(sq_dist_to_centroid(cv.row(v), centroid, centroid_sq, dim_pos), v);
    std::sort(by_dist.begin(), by_dist.end());

    std::vector<VertexId> bucket = seeds;
    std::size_t fill = std::min(cfg.bucket_size - cfg.seeds_per_bucket, by_dist.size());
    for (std::size_t i = 0; i < fill; ++i) bucket.push_back(by_dist[i].second);

    std::vector<VertexId> taken = bucket;
    std::sort(taken.begin(), taken.end());
    std::vector<VertexId> remaining;
    remaining.reserve(unassigned.size() - bucket.size());
    for (VertexId v : unassigned)
      if (!std::binary_search(taken.begin(), taken.end(), v)) remaining.push_back(v);
    unassigned = std::move(remaining);
    buckets.push_back(std::move(bucket));
  }

  ClusterLabeling out;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::vector<VertexId>& members = buckets[b];
    std::sort(members.begin(), members.end());
    std::size_t k = std::min<std::size_t>(cfg.k_per_bucket, members.size());

    // Init centroids from k distinct random members.
    std::vector<VertexId> pick = members;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(pick.size() - i));
      std::swap(pick[i], pick[j]);
    }
    std::vector<std::vector<double>> centroids(k, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < k; ++c)
      for (const auto& [d, v] : cv.row(pick[c])) centroids[c][dim_pos[d]] = v;

    std::vector<std::size_t> assign(members.size(), 0);
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
      std::vector<double> centroid_sq(k, 0.0);
      for (std::size_t c = 0; c < k; ++c)
        for (double x : centroids[c]) centroid_sq[c] += x * x;

      for (std::size_t m = 0; m < members.size(); ++m) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
          double d = sq_dist_to_centroid(cv.row(members[m]), centroids[c], centroid_sq[c],
                                         dim_pos);
          if (d < best) {
            best = d;
            best_c = c;
          }
        }
        assign[m] = best_c;
      }

      std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t m = 0; m < members.size(); ++m) {
        ++counts[assign[m]];
        for (const auto& [d, v] : cv.row(members[m])) next[assign[m]][dim_pos[d]] += v;
      }
      double shift = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
          next[c] = centroids[c];  // keep empty clusters where they were
          continue;
        }
        for (double& x : next[c]) x /= static_cast<double>(counts[c]);
        double d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          double diff = next[c][i] - centroids[c][i];
          d += diff * diff;
        }
        shift = std::max(shift, std::sqrt(d));
      }
      centroids = std::move(next);
      if (shift < cfg.convergence_tol) break;
    }

    std::vector<double> centroid_sq(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      for (double x : centroids[c]) centroid_sq[c] += x * x;
    for (std::size_t m = 0; m < members.size(); ++m) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double d =
            sq_dist_to_centroid(cv.row(members[m]), centroids[c], centroid_sq[c], dim_pos);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      LabelId l = out.intern("b" + std::to_string(b) + ".k" + std::to_string(best_c));
      out.add(members[m], l);
    }
  }
  return out;
}

}  // namespace kg::cluster
