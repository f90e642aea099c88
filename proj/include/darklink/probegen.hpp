// Keyword candidate generation, synthetic two-network datasets, and naive
// reference implementations used as test oracles.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "darklink/graph.hpp"
#include "darklink/ingest.hpp"
#include "darklink/metrics.hpp"

namespace darklink {

enum class KeywordPosition : unsigned char { Prefix, Suffix, Anywhere };

std::string_view to_string(KeywordPosition p);
std::optional<KeywordPosition> parse_keyword_position(std::string_view s);

struct CandidateSpec {
  std::string keyword;
  AddressKind kind = AddressKind::OnionV2;  // OnionV2 or OnionV3
  KeywordPosition position = KeywordPosition::Prefix;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

struct CandidateSet {
  std::vector<Domain> domains;
  /// Fewer than `count` distinct addresses exist (or were found) for the spec.
  bool exhausted = false;
};

/// Distinct onion addresses containing the keyword at the requested
/// position, remaining characters from a seeded base32 stream. Throws
/// std::invalid_argument for keywords outside [a-z2-7] or too long.
CandidateSet generate_candidates(const CandidateSpec& spec);

/// Candidates present in known.nodes, in candidate order.
std::vector<Domain> check_membership(const std::vector<Domain>& candidates, const Dataset& known);

struct SynthSpec {
  std::size_t n_i2p = 0;
  std::size_t n_tor = 0;
  double hub_fraction = 0.01;
  double attachment_exponent = 1.0;
  double cross_edge_prob = 0.03;
  double target_avg_degree = 6.0;
  std::uint64_t seed = 0;
};

/// Total edge count a spec produces: round(target_avg_degree * n).
std::size_t synth_edge_count(const SynthSpec& spec);

/// Two weakly coupled preferential-attachment networks. Node counts are
/// exact; each edge is cross-network independently with cross_edge_prob.
/// Throws std::invalid_argument for infeasible specs.
Dataset synth_graph(const SynthSpec& spec);

class GuardrailError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DistanceMatrix {
  static constexpr int kUnreachable = -1;
  std::size_t n = 0;
  std::vector<int> data;
  int at(std::size_t u, std::size_t v) const { return data[u * n + v]; }
};

/// All-pairs shortest path lengths by plain BFS from every node. n <= 512.
DistanceMatrix oracle_all_pairs(const LinkGraph& g, bool undirected = false);

/// Betweenness by explicit enumeration of every shortest path, summed as
/// exact fractions. n <= 10.
ScoreVector oracle_betweenness(const LinkGraph& g);

/// PageRank by dense solution of the stationarity system. n <= 200.
ScoreVector oracle_pagerank(const LinkGraph& g, double damping = 0.85);

}  // namespace darklink
