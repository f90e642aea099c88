#include "darklink/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace darklink {

std::optional<NodeId> LinkGraph::find(std::string_view canonical) const {
  auto it = std::lower_bound(domains_.begin(), domains_.end(), canonical,
                             [](const Domain& d, std::string_view c) { return d.canonical < c; });
  if (it == domains_.end() || it->canonical != canonical) return std::nullopt;
  return NodeId{static_cast<std::uint32_t>(it - domains_.begin())};
}

LinkGraph LinkGraph::from_parts(std::vector<Domain> domains, std::span<const Edge> edges) {
  LinkGraph g;
  const std::size_t n = domains.size();
  g.domains_ = std::move(domains);
  g.labels_.reserve(n);
  for (const auto& d : g.domains_) g.labels_.push_back(d.network);

  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (auto e : edges) {
    if (e.src >= n || e.dst >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("self-loop in graph input");
    ++g.out_offsets_[e.src + 1];
    ++g.in_offsets_[e.dst + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    g.out_offsets_[v + 1] += g.out_offsets_[v];
    g.in_offsets_[v + 1] += g.in_offsets_[v];
  }
  g.out_targets_.resize(edges.size());
  g.in_sources_.resize(edges.size());
  std::vector<std::size_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // Edges sorted by (src, dst) yield sorted lists in both directions.
  for (auto e : edges) {
    g.out_targets_[out_fill[e.src]++] = e.dst;
    g.in_sources_[in_fill[e.dst]++] = e.src;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto out = std::span(g.out_targets_).subspan(g.out_offsets_[v], g.out_degree(v));
    if (!std::is_sorted(out.begin(), out.end())) std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
      throw std::invalid_argument("parallel edge in graph input");
    }
    auto in = std::span(g.in_sources_).subspan(g.in_offsets_[v], g.in_degree(v));
    if (!std::is_sorted(in.begin(), in.end())) std::sort(in.begin(), in.end());
  }
  return g;
}

LinkGraph build_graph(const Dataset& d) { return LinkGraph::from_parts(d.nodes, d.edges); }

LinkGraph induced_subgraph(const LinkGraph& g, const std::vector<bool>& keep) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::vector<Domain> domains;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (keep[v]) {
      remap[v] = static_cast<std::uint32_t>(domains.size());
      domains.push_back(g.domains()[v]);
    }
  }
  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (remap[v] == UINT32_MAX) continue;
    for (auto w : g.out_neighbors(v)) {
      if (remap[w] != UINT32_MAX) edges.push_back({remap[v], remap[w]});
    }
  }
  return LinkGraph::from_parts(std::move(domains), edges);
}

LinkGraph subgraph_by_network(const LinkGraph& g, Network net) {
  std::vector<bool> keep(g.node_count());
  for (std::size_t v = 0; v < keep.size(); ++v) keep[v] = g.labels()[v] == net;
  return induced_subgraph(g, keep);
}

Dataset to_dataset(const LinkGraph& g) {
  Dataset d;
  d.nodes = g.domains();
  d.edges.reserve(g.edge_count());
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    for (auto w : g.out_neighbors(v)) d.edges.push_back({v, w});
  }
  return d;
}

DegreeVectors degree_vectors(const LinkGraph& g) {
  DegreeVectors dv;
  dv.in.resize(g.node_count());
  dv.out.resize(g.node_count());
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    dv.in[v] = static_cast<double>(g.in_degree(v));
    dv.out[v] = static_cast<double>(g.out_degree(v));
  }
  return dv;
}

}  // namespace darklink
