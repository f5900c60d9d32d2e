#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/io.hpp"

namespace soc {

struct ScoreMeta {
  std::string measure;
  nlohmann::json params = nlohmann::json::object();
  std::string omega;  // e.g. "none", "all", "ratio=0.3 seed=7", "file=omega.txt"
  std::optional<std::uint64_t> seed;
};

// Per-node scores, indexed by NodeId.
struct ScoreVector {
  std::vector<double> values;
  ScoreMeta meta;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

inline nlohmann::json meta_to_json(const ScoreMeta& m) {
  nlohmann::json j;
  j["measure"] = m.measure;
  j["params"] = m.params;
  j["omega"] = m.omega;
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  return j;
}

// "node_label,score" rows after a header line. Optional leading '#' comment lines.
inline void write_scores_csv(std::ostream& out, const Graph& g, std::span<const double> values,
                             const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "node_label,score\n";
  for (NodeId v = 0; v < values.size(); ++v) out << g.label(v) << ',' << format_double(values[v]) << '\n';
}

inline nlohmann::json scores_to_json(const Graph& g, const ScoreVector& s) {
  nlohmann::json j;
  j["meta"] = meta_to_json(s.meta);
  nlohmann::json rows = nlohmann::json::array();
  for (NodeId v = 0; v < s.values.size(); ++v) rows.push_back({{"node", g.label(v)}, {"score", s.values[v]}});
  j["scores"] = std::move(rows);
  return j;
}

// Reads back "node_label,score" files; '#' lines and the header are skipped.
inline std::vector<std::pair<std::string, double>> read_scores_csv(std::istream& in) {
  std::vector<std::pair<std::string, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (s == "node_label,score") continue;
    const auto comma = s.rfind(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'node_label,score'", lineno);
    const std::string_view value = detail::trim(s.substr(comma + 1));
    double x = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || p != value.data() + value.size()) throw ParseError("bad score value", lineno);
    rows.emplace_back(std::string(detail::trim(s.substr(0, comma))), x);
  }
  return rows;
}

}  // namespace soc
