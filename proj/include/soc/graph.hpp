#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "soc/errors.hpp"

namespace soc {

using NodeId = std::uint32_t;

struct Edge {
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Compressed sparse row out-adjacency over [0, size()).
class Adjacency {
 public:
  Adjacency() : offsets_(1, 0) {}

  // Arcs must already be grouped by tail; offsets has size()+1 entries.
  Adjacency(std::vector<std::size_t> offsets, std::vector<NodeId> heads)
      : offsets_(std::move(offsets)), heads_(std::move(heads)) {
    if (offsets_.empty() || offsets_.back() != heads_.size()) {
      throw std::invalid_argument("Adjacency: offsets do not match heads");
    }
  }

  // Builds from an arbitrary arc list; heads of each tail come out sorted ascending.
  static Adjacency from_arcs(std::size_t n, std::span<const Edge> arcs) {
    std::vector<std::size_t> offsets(n + 1, 0);
    for (const Edge& a : arcs) {
      if (a.from >= n || a.to >= n) throw std::out_of_range("Adjacency: arc endpoint out of range");
      ++offsets[a.from + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeId> heads(arcs.size());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const Edge& a : arcs) heads[fill[a.from]++] = a.to;
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(heads.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                heads.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
    return Adjacency(std::move(offsets), std::move(heads));
  }

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t arc_count() const noexcept { return heads_.size(); }

  std::span<const NodeId> out(NodeId v) const noexcept {
    return {heads_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t out_degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  Adjacency reversed() const {
    std::vector<Edge> arcs;
    arcs.reserve(heads_.size());
    for (NodeId v = 0; v < size(); ++v) {
      for (NodeId w : out(v)) arcs.push_back({w, v});
    }
    return from_arcs(size(), arcs);
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> heads_;
};

// Base network. Undirected edges are stored once and expanded to two arcs in
// arcs(); duplicate edges collapse; self-loops are kept as a single arc.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t n, std::vector<Edge> edges, bool directed,
                          std::vector<std::string> labels = {}) {
    Graph g;
    g.directed_ = directed;
    for (Edge& e : edges) {
      if (e.from >= n || e.to >= n) throw InputError("edge endpoint out of range");
      if (!directed && e.from > e.to) std::swap(e.from, e.to);
    }
    std::sort(edges.begin(), edges.end());
    const auto unique_end = std::unique(edges.begin(), edges.end());
    g.duplicates_ = static_cast<std::size_t>(edges.end() - unique_end);
    edges.erase(unique_end, edges.end());
    g.self_loops_ = static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.from == e.to; }));

    std::vector<Edge> arcs;
    arcs.reserve(directed ? edges.size() : 2 * edges.size());
    for (const Edge& e : edges) {
      arcs.push_back(e);
      if (!directed && e.from != e.to) arcs.push_back({e.to, e.from});
    }
    g.arcs_ = Adjacency::from_arcs(n, arcs);
    g.edges_ = std::move(edges);

    if (labels.empty()) {
      labels.reserve(n);
      for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (labels.size() != n) throw InputError("label count does not match node count");
    g.labels_ = std::move(labels);
    g.index_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
      if (!g.index_.emplace(g.labels_[i], i).second) {
        throw InputError("duplicate node label '" + g.labels_[i] + "'");
      }
    }
    return g;
  }

  std::size_t node_count() const noexcept { return arcs_.size(); }
  // Stored edges after de-duplication (arcs if directed, unordered edges otherwise).
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    check(v);
    return arcs_.out(v);
  }
  std::size_t out_degree(NodeId v) const {
    check(v);
    return arcs_.out_degree(v);
  }

  const Adjacency& arcs() const noexcept { return arcs_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const std::string& label(NodeId v) const {
    check(v);
    return labels_[v];
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t duplicates_collapsed() const noexcept { return duplicates_; }
  std::size_t self_loops() const noexcept { return self_loops_; }

 private:
  void check(NodeId v) const {
    if (v >= node_count()) {
      throw std::out_of_range("node id " + std::to_string(v) + " out of range [0, " +
                              std::to_string(node_count()) + ")");
    }
  }

  Adjacency arcs_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  bool directed_ = false;
  std::size_t duplicates_ = 0;
  std::size_t self_loops_ = 0;
};

inline std::span<const NodeId> out_neighbors(const Graph& g, NodeId v) { return g.out_neighbors(v); }

class RefillSet {
 public:
  RefillSet() = default;

  RefillSet(std::size_t n, std::span<const NodeId> members) : mask_(n, 0) {
    for (NodeId v : members) {
      if (v >= n) throw InputError("refill node " + std::to_string(v) + " out of range");
      mask_[v] = 1;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (mask_[v]) members_.push_back(v);
    }
  }

  static RefillSet none(std::size_t n) { return RefillSet(n, {}); }
  static RefillSet all(std::size_t n) {
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    return RefillSet(n, ids);
  }

  bool contains(NodeId v) const noexcept { return v < mask_.size() && mask_[v] != 0; }
  std::span<const NodeId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t universe() const noexcept { return mask_.size(); }

 private:
  std::vector<std::uint8_t> mask_;
  std::vector<NodeId> members_;
};

// A graph with refill nodes and a full-charge budget. Cheap to copy; the graph is shared.
class SocInstance {
 public:
  SocInstance(std::shared_ptr<const Graph> graph, RefillSet omega, unsigned kappa)
      : graph_(std::move(graph)), omega_(std::move(omega)), kappa_(kappa) {
    if (!graph_) throw InputError("SocInstance: null graph");
    if (kappa_ < 1) throw InputError("SocInstance: kappa must be >= 1");
    if (omega_.universe() != graph_->node_count()) {
      throw InputError("SocInstance: refill set does not match graph size");
    }
  }

  SocInstance(Graph graph, RefillSet omega, unsigned kappa)
      : SocInstance(std::make_shared<const Graph>(std::move(graph)), std::move(omega), kappa) {}

  const Graph& graph() const noexcept { return *graph_; }
  std::shared_ptr<const Graph> shared_graph() const noexcept { return graph_; }
  const RefillSet& omega() const noexcept { return omega_; }
  unsigned kappa() const noexcept { return kappa_; }
  std::size_t node_count() const noexcept { return graph_->node_count(); }

  SocInstance with_omega(RefillSet omega) const { return {graph_, std::move(omega), kappa_}; }
  SocInstance with_kappa(unsigned kappa) const { return {graph_, omega_, kappa}; }

 private:
  std::shared_ptr<const Graph> graph_;
  RefillSet omega_;
  unsigned kappa_;
};

}  // namespace soc
