#include "kg/graph_io.hpp"

#include <cstdlib>
#include <sstream>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg {

std::string universe_to_tsv(const UniverseGraph& u) {
  std::ostringstream out;
  for (const Edge& e : u.edges())
    out << e.u << "\t" << e.v << "\t" << format_double(u.edge_weight(e.u, e.v)) << "\n";
  return out.str();
}

UniverseGraph universe_from_tsv(const std::string& content) {
  UniverseGraph u;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 3)
      throw DataError("edge tsv line " + std::to_string(line_no) + ": expected 3 fields");
    char* end = nullptr;
    unsigned long a = std::strtoul(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0')
      throw DataError("edge tsv line " + std::to_string(line_no) + ": bad vertex id");
    unsigned long b = std::strtoul(fields[1].c_str(), &end, 10);
    if (end == fields[1].c_str() || *end != '\0')
      throw DataError("edge tsv line " + std::to_string(line_no) + ": bad vertex id");
    double w = std::strtod(fields[2].c_str(), &end);
    if (end == fields[2].c_str() || *end != '\0')
      throw DataError("edge tsv line " + std::to_string(line_no) + ": bad weight");
    u.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b), w);
  }
  u.freeze();
  return u;
}

UniverseGraph load_universe(const std::filesystem::path& edges_tsv) {
  return universe_from_tsv(read_file(edges_tsv));
}

std::string vertex_labels_to_tsv(const UniverseGraph& u) {
  std::ostringstream out;
  for (const auto& [key, values] : u.vertex_labels())
    for (const auto& [id, value] : values) out << id << "\t" << key << "\t" << value << "\n";
  return out.str();
}

void apply_vertex_labels_tsv(UniverseGraph& u, const std::string& content) {
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 3)
      throw DataError("label tsv line " + std::to_string(line_no) + ": expected 3 fields");
    char* end = nullptr;
    unsigned long id = std::strtoul(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0')
      throw DataError("label tsv line " + std::to_string(line_no) + ": bad vertex id");
    u.set_vertex_label(fields[1], static_cast<VertexId>(id), fields[2]);
  }
}

}  // namespace kg
