#pragma once

#include <filesystem>
#include <string>

#include "kg/graph.hpp"

namespace kg {

/// Edge TSV: one `u<TAB>v<TAB>weight` line per edge, u < v, sorted.
std::string universe_to_tsv(const UniverseGraph& u);
UniverseGraph universe_from_tsv(const std::string& content);
UniverseGraph load_universe(const std::filesystem::path& edges_tsv);

/// Sidecar label TSV: `id<TAB>key<TAB>value` lines sorted by (key, id).
std::string vertex_labels_to_tsv(const UniverseGraph& u);
void apply_vertex_labels_tsv(UniverseGraph& u, const std::string& content);

}  // namespace kg
