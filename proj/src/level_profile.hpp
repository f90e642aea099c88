// Internal: per-source BFS level statistics via bit-parallel multi-source BFS.
#pragma once

#include <cstdint>
#include <vector>

#include "darklink/graph.hpp"
#include "darklink/metrics.hpp"

namespace darklink::detail {

struct SourceProfile {
  std::uint64_t reached = 0;       // nodes at finite distance >= 1
  std::uint64_t distance_sum = 0;
  std::uint32_t eccentricity = 0;  // max finite distance
  double harmonic_sum = 0.0;       // sum over levels l of count(l) / l, l ascending
};

/// One profile per node, BFS following `direction` from each source.
std::vector<SourceProfile> level_profiles(const LinkGraph& g, Direction direction, unsigned threads);

}  // namespace darklink::detail
