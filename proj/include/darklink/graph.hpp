// Immutable labeled directed link graph in compressed sparse row form.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "darklink/domain.hpp"
#include "darklink/ingest.hpp"

namespace darklink {

/// Dense node index, valid only against the graph that issued it.
struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

class LinkGraph {
 public:
  LinkGraph() = default;

  std::size_t node_count() const { return domains_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }

  const Domain& domain(NodeId id) const { return domains_[id.value]; }
  const std::vector<Domain>& domains() const { return domains_; }
  Network label(NodeId id) const { return labels_[id.value]; }
  const std::vector<Network>& labels() const { return labels_; }

  /// Node ids follow lexicographic order of canonical names, so lookup is a
  /// binary search.
  std::optional<NodeId> find(std::string_view canonical) const;

  std::span<const std::uint32_t> out_neighbors(std::uint32_t v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const std::uint32_t> in_neighbors(std::uint32_t v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(std::uint32_t v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(std::uint32_t v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  /// Builds from canonical nodes and a sorted, unique, loop-free edge list.
  static LinkGraph from_parts(std::vector<Domain> domains, std::span<const Edge> edges);

 private:
  std::vector<Domain> domains_;
  std::vector<Network> labels_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::uint32_t> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<std::uint32_t> in_sources_;
};

LinkGraph build_graph(const Dataset& d);

/// Induced subgraph on nodes labeled `net`; ids re-densified in the same
/// relative (lexicographic) order.
LinkGraph subgraph_by_network(const LinkGraph& g, Network net);

/// Induced subgraph on the nodes with keep[v] set.
LinkGraph induced_subgraph(const LinkGraph& g, const std::vector<bool>& keep);

/// Dataset whose build_graph reproduces `g` with identical ids.
Dataset to_dataset(const LinkGraph& g);

struct DegreeVectors {
  std::vector<double> in;
  std::vector<double> out;
};

DegreeVectors degree_vectors(const LinkGraph& g);

}  // namespace darklink
