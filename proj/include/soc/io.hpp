#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "soc/errors.hpp"
#include "soc/graph.hpp"

namespace soc {

enum class EdgeListFormat { kSnapTsv, kMatrixMarket, kCsv };

inline EdgeListFormat parse_format(std::string_view name) {
  if (name == "snap-tsv" || name == "snap" || name == "tsv") return EdgeListFormat::kSnapTsv;
  if (name == "matrix-market" || name == "mtx") return EdgeListFormat::kMatrixMarket;
  if (name == "csv") return EdgeListFormat::kCsv;
  throw InputError("unknown edge-list format '" + std::string(name) + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

// Assigns dense ids to string labels in order of first appearance.
class LabelInterner {
 public:
  NodeId intern(std::string_view label) {
    auto [it, inserted] = ids_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
  }
  std::vector<std::string> take_labels() { return std::move(labels_); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> labels_;
};

inline Graph read_pairs(std::istream& in, bool directed, bool csv) {
  LabelInterner labels;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == '%') continue;
    std::vector<std::string_view> fields;
    if (csv) {
      const auto comma = s.find(',');
      if (comma == std::string_view::npos) throw ParseError("expected 'u,v'", lineno);
      auto rest = s.substr(comma + 1);
      const auto comma2 = rest.find(',');
      if (comma2 != std::string_view::npos) rest = rest.substr(0, comma2);
      fields = {trim(s.substr(0, comma)), trim(rest)};
      if (fields[0].empty() || fields[1].empty()) throw ParseError("empty field", lineno);
    } else {
      fields = split_ws(s);
      if (fields.size() < 2) throw ParseError("expected two node ids", lineno);
    }
    if (csv && first_data_line) {
      // Optional header: any non-integer field on the first data line.
      std::uint64_t tmp = 0;
      first_data_line = false;
      if (!parse_u64(fields[0], tmp) || !parse_u64(fields[1], tmp)) continue;
    }
    first_data_line = false;
    const NodeId u = labels.intern(fields[0]);
    const NodeId v = labels.intern(fields[1]);
    edges.push_back({u, v});
  }
  if (labels.size() == 0) throw InputError("empty graph: no edges found");
  const std::size_t n = labels.size();
  return Graph::from_edges(n, std::move(edges), directed, labels.take_labels());
}

inline Graph read_matrix_market(std::istream& in, bool directed) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing MatrixMarket header", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, layout, field, symmetry;
    hs >> banner >> object >> layout >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || layout != "coordinate") {
      throw ParseError("expected '%%MatrixMarket matrix coordinate ...' header", lineno);
    }
    if (field == "complex") throw ParseError("complex matrices are not supported", lineno);
  }
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '%') continue;
    const auto f = split_ws(s);
    if (!have_size) {
      if (f.size() < 3 || !parse_u64(f[0], rows) || !parse_u64(f[1], cols) || !parse_u64(f[2], nnz)) {
        throw ParseError("expected 'rows cols nnz' size line", lineno);
      }
      have_size = true;
      edges.reserve(nnz);
      continue;
    }
    std::uint64_t i = 0, j = 0;
    if (f.size() < 2 || !parse_u64(f[0], i) || !parse_u64(f[1], j)) {
      throw ParseError("expected 'row col [value]' entry", lineno);
    }
    if (i < 1 || j < 1 || i > rows || j > cols) throw ParseError("entry index out of range", lineno);
    edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(j - 1)});
  }
  if (!have_size) throw ParseError("missing size line", lineno);
  if (edges.size() != nnz) {
    throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(edges.size()),
                     lineno);
  }
  const std::size_t n = std::max(rows, cols);
  if (n == 0) throw InputError("empty graph: zero-dimension matrix");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
  return Graph::from_edges(n, std::move(edges), directed, std::move(labels));
}

}  // namespace detail

inline Graph read_edge_list(std::istream& in, EdgeListFormat format, bool directed) {
  switch (format) {
    case EdgeListFormat::kSnapTsv:
      return detail::read_pairs(in, directed, false);
    case EdgeListFormat::kCsv:
      return detail::read_pairs(in, directed, true);
    case EdgeListFormat::kMatrixMarket:
      return detail::read_matrix_market(in, directed);
  }
  throw InputError("unknown edge-list format");
}

// Loads a graph; node labels are remapped to dense ids (first appearance order,
// or 1-based row index for MatrixMarket). Duplicates are collapsed and counted.
inline Graph load_edge_list(const std::string& path, EdgeListFormat format, bool directed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_edge_list(in, format, directed);
}

// Writes stored edges as "<label>\t<label>" lines using the graph's labels.
inline void write_snap_tsv(std::ostream& out, const Graph& g) {
  out << "# " << (g.directed() ? "directed" : "undirected") << " nodes " << g.node_count() << " edges "
      << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << g.label(e.from) << '\t' << g.label(e.to) << '\n';
}

// One node label per line; '#' comments allowed.
inline std::vector<NodeId> read_node_list(std::istream& in, const Graph& g) {
  std::vector<NodeId> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto id = g.find(std::string(s));
    if (!id) throw ParseError("unknown node label '" + std::string(s) + "'", lineno);
    ids.push_back(*id);
  }
  return ids;
}

// Shortest round-trip decimal representation; locale independent.
inline std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

}  // namespace soc
