#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "darklink/graph.hpp"
#include "darklink/metrics.hpp"
#include "darklink/probegen.hpp"

namespace testing {

// Distinct valid name for index i; odd indices are Tor when `mixed` is set.
// make_graph sorts the names, so graph ids follow name order.
inline darklink::Domain node_domain(std::size_t i, bool mixed) {
  char buf[32];
  if (mixed && i % 2 == 1) {
    std::snprintf(buf, sizeof buf, "n%015zu.onion", i);
    // digits are outside the base32 alphabet past 7; map to letters
    std::string s(buf);
    for (std::size_t k = 1; k < 16; ++k) s[k] = static_cast<char>('a' + (s[k] - '0'));
    return darklink::Domain{s, s, darklink::Network::Tor, darklink::AddressKind::OnionV2};
  }
  std::snprintf(buf, sizeof buf, "n%05zu.i2p", i);
  return darklink::Domain{buf, buf, darklink::Network::I2p, darklink::AddressKind::I2pNamed};
}

inline darklink::LinkGraph make_graph(std::size_t n,
                                      std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                                      bool mixed = false) {
  std::vector<darklink::Domain> domains;
  for (std::size_t i = 0; i < n; ++i) domains.push_back(node_domain(i, mixed));
  std::sort(domains.begin(), domains.end());
  std::vector<darklink::Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return darklink::LinkGraph::from_parts(std::move(domains), edges);
}

// Erdos-Renyi style digraph, no self-loops.
inline darklink::LinkGraph random_digraph(std::mt19937_64& rng, std::size_t n, double p,
                                          bool mixed = false) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = 0; v < n; ++v)
      if (u != v && coin(rng)) pairs.emplace_back(u, v);
  return make_graph(n, pairs, mixed);
}


// Harmonic closeness by definition from an all-pairs matrix, summed by
// ascending distance so the floating point order matches the level sum.
inline std::vector<double> closeness_from(const darklink::DistanceMatrix& dm) {
  const std::size_t n = dm.n;
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (std::size_t u = 0; u < n; ++u) {
    int maxd = 0;
    for (std::size_t v = 0; v < n; ++v) maxd = std::max(maxd, dm.at(u, v));
    double s = 0.0;
    for (int d = 1; d <= maxd; ++d) {
      std::size_t c = 0;
      for (std::size_t v = 0; v < n; ++v) c += dm.at(u, v) == d;
      s += static_cast<double>(c) / d;
    }
    out[u] = s / static_cast<double>(n - 1);
  }
  return out;
}

inline darklink::DistanceMatrix transpose(const darklink::DistanceMatrix& dm) {
  darklink::DistanceMatrix t = dm;
  for (std::size_t u = 0; u < dm.n; ++u)
    for (std::size_t v = 0; v < dm.n; ++v) t.data[v * dm.n + u] = dm.at(u, v);
  return t;
}

inline darklink::PathStats path_from(const darklink::DistanceMatrix& dm) {
  darklink::PathStats p;
  for (std::size_t u = 0; u < dm.n; ++u)
    for (std::size_t v = 0; v < dm.n; ++v) {
      int d = dm.at(u, v);
      if (u == v || d == darklink::DistanceMatrix::kUnreachable) continue;
      ++p.reachable_pairs;
      p.distance_sum += static_cast<std::uint64_t>(d);
      p.diameter = std::max<std::uint32_t>(p.diameter, static_cast<std::uint32_t>(d));
    }
  p.no_reachable_pairs = p.reachable_pairs == 0;
  if (p.reachable_pairs)
    p.avg_path_length = static_cast<double>(p.distance_sum) / static_cast<double>(p.reachable_pairs);
  return p;
}

}  // namespace testing
