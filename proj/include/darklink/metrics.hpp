// Graph-level summary metrics and node centralities.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "darklink/graph.hpp"

namespace darklink {

enum class PairSemantics : unsigned char { Directed, Undirected };
enum class ComponentMode : unsigned char { Weak, Strong };
/// Out: distances from the node. In: distances to the node.
enum class Direction : unsigned char { Out, In, Undirected };
enum class Metric : unsigned char { InDegree, OutDegree, HarmonicCloseness, Betweenness, PageRank };

std::string_view to_string(PairSemantics s);
std::string_view to_string(ComponentMode m);
std::string_view to_string(Direction d);
std::string_view to_string(Metric m);
std::optional<PairSemantics> parse_pair_semantics(std::string_view s);
std::optional<ComponentMode> parse_component_mode(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<Metric> parse_metric(std::string_view s);

/// Parameters a score vector was computed with, plus solver diagnostics.
struct ScoreParams {
  std::optional<Direction> direction;
  std::optional<double> damping;
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
  std::optional<int> iterations;
  std::optional<bool> converged;
  std::optional<double> final_delta;
  std::optional<std::size_t> pivots;  // sampled betweenness only
  std::optional<std::uint64_t> seed;
};

struct ScoreVector {
  Metric metric = Metric::InDegree;
  std::vector<double> values;
  ScoreParams params;
};

namespace flags {
inline constexpr unsigned kEmptyGraph = 1u << 0;
inline constexpr unsigned kSingleNode = 1u << 1;
inline constexpr unsigned kNoReachablePairs = 1u << 2;
}  // namespace flags

struct GraphMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double avg_degree = 0.0;  // m / n
  double density = 0.0;     // m / (n (n - 1))
  double avg_path_length = 0.0;
  std::uint32_t diameter = 0;
  std::size_t connected_components = 0;
  std::uint64_t reachable_pairs = 0;
  PairSemantics pair_semantics = PairSemantics::Directed;
  ComponentMode component_mode = ComponentMode::Weak;
  unsigned flags = 0;

  friend bool operator==(const GraphMetrics&, const GraphMetrics&) = default;
};

struct SummaryOptions {
  PairSemantics pair_semantics = PairSemantics::Directed;
  ComponentMode component_mode = ComponentMode::Weak;
  unsigned threads = 0;
};

GraphMetrics graph_summary(const LinkGraph& g, const SummaryOptions& opts = {});

struct Components {
  std::vector<std::uint32_t> labels;  // dense, ordered by smallest member id
  std::size_t count = 0;
};

Components connected_components(const LinkGraph& g, ComponentMode mode);

struct PathStats {
  double avg_path_length = 0.0;
  std::uint32_t diameter = 0;
  std::uint64_t reachable_pairs = 0;
  std::uint64_t distance_sum = 0;
  bool no_reachable_pairs = true;
};

/// BFS from every node; unreachable pairs are excluded from the mean.
PathStats path_stats(const LinkGraph& g, PairSemantics semantics, unsigned threads = 0);

/// value(u) = (1/(n-1)) * sum over v != u of 1/d(u,v), 1/inf = 0.
ScoreVector harmonic_closeness(const LinkGraph& g, Direction direction, unsigned threads = 0);

struct ExactBetweenness {};
struct SampledBetweenness {
  std::size_t pivots = 0;
  std::uint64_t seed = 0;
};
using BetweennessStrategy = std::variant<ExactBetweenness, SampledBetweenness>;

/// Unnormalized directed betweenness (Brandes). Sampled runs accumulate from
/// `pivots` seeded source nodes and scale by n / pivots; pivots >= n runs
/// exact.
ScoreVector betweenness(const LinkGraph& g, const BetweennessStrategy& strategy = ExactBetweenness{},
                        unsigned threads = 0);

/// The seeded pivot set used by sampled betweenness, ascending.
std::vector<std::uint32_t> sample_pivots(std::size_t n, std::size_t k, std::uint64_t seed);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-9;
  int max_iterations = 200;
};

/// Power iteration with dangling mass spread uniformly. Stops when the L1
/// change falls below the tolerance; params.converged reports whether it did.
ScoreVector pagerank(const LinkGraph& g, const PageRankOptions& opts = {}, unsigned threads = 0);

std::pair<ScoreVector, ScoreVector> degrees(const LinkGraph& g);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace darklink
