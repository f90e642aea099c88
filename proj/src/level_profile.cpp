#include "level_profile.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <span>

#include "darklink/parallel.hpp"

namespace darklink::detail {
namespace {

constexpr std::size_t kLanes = 64;
constexpr std::size_t kCounterBits = 32;

// 64 lane-parallel counters stored as bit slices: slice k holds bit k of
// every lane's count. Adding a lane mask is a ripple-carry over slices.
struct SlicedCounter {
  std::array<std::uint64_t, kCounterBits> slice{};

  void add(std::uint64_t mask) {
    for (std::size_t k = 0; mask && k < kCounterBits; ++k) {
      auto carry = slice[k] & mask;
      slice[k] ^= mask;
      mask = carry;
    }
  }
  std::uint64_t lane(std::size_t i) const {
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < kCounterBits; ++k) c |= ((slice[k] >> i) & 1u) << k;
    return c;
  }
  void clear() { slice.fill(0); }
};

// Neighbor lists for one direction, relabeled so that ids follow `order`.
struct LocalAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;

  std::span<const std::uint32_t> operator()(std::uint32_t v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

template <class Visit>
void for_each_neighbor(const LinkGraph& g, Direction dir, std::uint32_t v, Visit&& visit) {
  if (dir != Direction::In) {
    for (auto w : g.out_neighbors(v)) visit(w);
  }
  if (dir != Direction::Out) {
    for (auto w : g.in_neighbors(v)) visit(w);
  }
}

template <std::size_t W>
using LaneMask = std::array<std::uint64_t, W>;

template <std::size_t W>
bool any(const LaneMask<W>& m) {
  std::uint64_t r = 0;
  for (auto x : m) r |= x;
  return r != 0;
}

template <std::size_t W>
void run_batch(const LocalAdjacency& adj, std::span<const std::uint32_t> sources,
               std::span<const std::uint32_t> order, std::vector<SourceProfile>& out) {
  const std::size_t n = adj.offsets.size() - 1;
  const std::size_t count = sources.size();
  std::vector<LaneMask<W>> seen(n), visit(n), next(n);
  for (std::size_t i = 0; i < count; ++i) {
    seen[sources[i]][i / kLanes] |= std::uint64_t{1} << (i % kLanes);
    visit[sources[i]][i / kLanes] |= std::uint64_t{1} << (i % kLanes);
  }
  std::array<SlicedCounter, W> counter;
  std::uint32_t level = 0;
  bool active = true;
  while (active) {
    ++level;
    for (std::uint32_t v = 0; v < n; ++v) {
      const auto bits = visit[v];
      if (!any<W>(bits)) continue;
      for (auto w : adj(v)) {
        auto& t = next[w];
        for (std::size_t k = 0; k < W; ++k) t[k] |= bits[k];
      }
    }
    active = false;
    for (auto& c : counter) c.clear();
    for (std::uint32_t w = 0; w < n; ++w) {
      LaneMask<W> fresh;
      for (std::size_t k = 0; k < W; ++k) fresh[k] = next[w][k] & ~seen[w][k];
      next[w] = LaneMask<W>{};
      visit[w] = fresh;
      if (any<W>(fresh)) {
        for (std::size_t k = 0; k < W; ++k) {
          seen[w][k] |= fresh[k];
          counter[k].add(fresh[k]);
        }
        active = true;
      }
    }
    if (!active) break;
    for (std::size_t i = 0; i < count; ++i) {
      const auto c = counter[i / kLanes].lane(i % kLanes);
      if (!c) continue;
      auto& p = out[order[sources[i]]];
      p.reached += c;
      p.distance_sum += c * level;
      p.eccentricity = level;
      p.harmonic_sum += static_cast<double>(c) / static_cast<double>(level);
    }
  }
}

// Undirected BFS order over all components. Sources batched in this order
// have overlapping frontiers, so each node is expanded on fewer levels.
std::vector<std::uint32_t> locality_order(const LinkGraph& g) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    order.push_back(root);
    for (std::size_t head = order.size() - 1; head < order.size(); ++head) {
      for_each_neighbor(g, Direction::Undirected, order[head], [&](std::uint32_t w) {
        if (!seen[w]) {
          seen[w] = true;
          order.push_back(w);
        }
      });
    }
  }
  return order;
}

}  // namespace

std::vector<SourceProfile> level_profiles(const LinkGraph& g, Direction direction,
                                          unsigned threads) {
  const std::size_t n = g.node_count();
  std::vector<SourceProfile> out(n);
  const auto order = locality_order(g);
  std::vector<std::uint32_t> position(n);
  for (std::uint32_t i = 0; i < n; ++i) position[order[i]] = i;
  LocalAdjacency adj;
  adj.offsets.reserve(n + 1);
  adj.offsets.push_back(0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto begin = adj.targets.size();
    for_each_neighbor(g, direction, order[i],
                      [&](std::uint32_t w) { adj.targets.push_back(position[w]); });
    std::sort(adj.targets.begin() + static_cast<std::ptrdiff_t>(begin), adj.targets.end());
    adj.offsets.push_back(adj.targets.size());
  }
  // A source without neighbors reaches nothing; its profile stays zero.
  std::vector<std::uint32_t> sources;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (adj.offsets[i + 1] != adj.offsets[i]) sources.push_back(i);
  }
  constexpr std::size_t kWords = 2;
  constexpr std::size_t kBatch = kWords * kLanes;
  const std::size_t batches = (sources.size() + kBatch - 1) / kBatch;
  parallel_for(batches, resolve_threads(threads), [&](std::size_t b) {
    const std::size_t first = b * kBatch;
    const std::size_t lanes = std::min(kBatch, sources.size() - first);
    run_batch<kWords>(adj, std::span(sources).subspan(first, lanes), order, out);
  });
  return out;
}

}  // namespace darklink::detail
