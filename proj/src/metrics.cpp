#include "darklink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "darklink/parallel.hpp"
#include "level_profile.hpp"

namespace darklink {
namespace {

// Sources per betweenness accumulation block. Fixed so that the floating
// point reduction order does not depend on the worker count.
constexpr std::size_t kSourceBlock = 64;

// Dependencies accumulate in extended precision and are rounded once, so
// small graphs reproduce the exact rational sums.
using Dep = long double;

// Forward adjacency relabeled by descending total degree, so the frequently
// visited hubs share cache lines.
struct HubOrderedAdjacency {
  std::vector<std::uint32_t> old_of;  // new id -> graph id
  std::vector<std::uint32_t> new_of;  // graph id -> new id
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;

  explicit HubOrderedAdjacency(const LinkGraph& g) {
    const auto n = static_cast<std::uint32_t>(g.node_count());
    old_of.resize(n);
    std::iota(old_of.begin(), old_of.end(), 0u);
    std::stable_sort(old_of.begin(), old_of.end(), [&](std::uint32_t a, std::uint32_t b) {
      return g.in_degree(a) + g.out_degree(a) > g.in_degree(b) + g.out_degree(b);
    });
    new_of.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) new_of[old_of[i]] = i;
    offsets.assign(n + 1, 0);
    targets.reserve(g.edge_count());
    for (std::uint32_t i = 0; i < n; ++i) {
      for (auto w : g.out_neighbors(old_of[i])) targets.push_back(new_of[w]);
      std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]), targets.end());
      offsets[i + 1] = targets.size();
    }
  }

  std::span<const std::uint32_t> out_neighbors(std::uint32_t v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

// Per-node search state packed into one cache line slot: an edge visit
// touches a single slot in both passes.
struct BrandesSlot {
  Dep coeff = 0.0L;  // (1 + delta) / sigma
  double sigma = 0.0;
  std::int32_t dist = -1;
};

struct BrandesScratch {
  std::vector<BrandesSlot> slot;
  std::vector<std::uint32_t> order;

  explicit BrandesScratch(std::size_t n) : slot(n), order(n + 1) {}
};

// Adds the dependencies of source `s` to `acc`. The backward pass pulls
// from successors: delta(v) = sigma(v) * sum over successors w of coeff(w).
void brandes_source(const HubOrderedAdjacency& g, std::uint32_t s, BrandesScratch& sc,
                    std::vector<Dep>& acc) {
  auto& slot = sc.slot;
  auto* order = sc.order.data();
  std::size_t tail = 0;
  slot[s].dist = 0;
  slot[s].sigma = 1.0;
  order[tail++] = s;
  // Branch-free relaxations: discovery and sigma updates are data dependent
  // and mispredict on nearly every edge otherwise.
  for (std::size_t head = 0; head < tail; ++head) {
    const auto v = order[head];
    const auto dv = slot[v].dist + 1;
    const double sv = slot[v].sigma;
    for (auto w : g.out_neighbors(v)) {
      auto& t = slot[w];
      const bool fresh = t.dist < 0;
      t.dist = fresh ? dv : t.dist;
      order[tail] = w;
      tail += fresh;
      t.sigma += t.dist == dv ? sv : 0.0;
    }
  }
  for (std::size_t i = tail; i-- > 1;) {
    const auto v = order[i];
    auto& sv = slot[v];
    const auto next = sv.dist + 1;
    Dep sum = 0.0L;
    for (auto w : g.out_neighbors(v)) {
      const auto& t = slot[w];
      sum += t.dist == next ? t.coeff : Dep(0);
    }
    const Dep delta = static_cast<Dep>(sv.sigma) * sum;
    sv.coeff = (1.0L + delta) / static_cast<Dep>(sv.sigma);
    acc[v] += delta;
  }
  for (std::size_t i = 0; i < tail; ++i) slot[order[i]] = BrandesSlot{};
}

std::vector<Dep> brandes(const LinkGraph& g, const std::vector<std::uint32_t>& sources,
                         unsigned threads) {
  const std::size_t n = g.node_count();
  const HubOrderedAdjacency adj(g);
  std::vector<Dep> total(n, 0.0L);
  const std::size_t blocks = (sources.size() + kSourceBlock - 1) / kSourceBlock;
  const std::size_t wave = std::max<std::size_t>(1, threads);
  std::vector<std::vector<Dep>> partial(std::min(wave, std::max<std::size_t>(blocks, 1)),
                                        std::vector<Dep>(n, 0.0L));

  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t in_wave = std::min(wave, blocks - first);
    parallel_for(in_wave, threads, [&](std::size_t slot) {
      auto& acc = partial[slot];
      std::fill(acc.begin(), acc.end(), 0.0L);
      BrandesScratch sc(n);
      const std::size_t b = first + slot;
      const std::size_t end = std::min(sources.size(), (b + 1) * kSourceBlock);
      for (std::size_t i = b * kSourceBlock; i < end; ++i) {
        if (g.out_degree(sources[i]) == 0) continue;
        brandes_source(adj, adj.new_of[sources[i]], sc, acc);
      }
    });
    for (std::size_t slot = 0; slot < in_wave; ++slot) {
      const auto& acc = partial[slot];
      for (std::size_t v = 0; v < n; ++v) total[v] += acc[adj.new_of[v]];
    }
  }
  return total;
}

}  // namespace

std::string_view to_string(PairSemantics s) {
  return s == PairSemantics::Directed ? "directed" : "undirected";
}
std::string_view to_string(ComponentMode m) { return m == ComponentMode::Weak ? "weak" : "strong"; }
std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Out: return "out";
    case Direction::In: return "in";
    case Direction::Undirected: return "undirected";
  }
  return "?";
}
std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::InDegree: return "in-degree";
    case Metric::OutDegree: return "out-degree";
    case Metric::HarmonicCloseness: return "closeness";
    case Metric::Betweenness: return "betweenness";
    case Metric::PageRank: return "pagerank";
  }
  return "?";
}

std::optional<PairSemantics> parse_pair_semantics(std::string_view s) {
  if (s == "directed") return PairSemantics::Directed;
  if (s == "undirected") return PairSemantics::Undirected;
  return std::nullopt;
}
std::optional<ComponentMode> parse_component_mode(std::string_view s) {
  if (s == "weak") return ComponentMode::Weak;
  if (s == "strong") return ComponentMode::Strong;
  return std::nullopt;
}
std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "out") return Direction::Out;
  if (s == "in") return Direction::In;
  if (s == "undirected") return Direction::Undirected;
  return std::nullopt;
}
std::optional<Metric> parse_metric(std::string_view s) {
  for (auto m : {Metric::InDegree, Metric::OutDegree, Metric::HarmonicCloseness,
                 Metric::Betweenness, Metric::PageRank}) {
    if (to_string(m) == s) return m;
  }
  if (s == "harmonic-closeness") return Metric::HarmonicCloseness;
  return std::nullopt;
}

Components connected_components(const LinkGraph& g, ComponentMode mode) {
  const std::size_t n = g.node_count();
  constexpr auto kUnset = UINT32_MAX;
  Components c;
  c.labels.assign(n, kUnset);

  if (mode == ComponentMode::Weak) {
    std::vector<std::uint32_t> stack;
    for (std::uint32_t root = 0; root < n; ++root) {
      if (c.labels[root] != kUnset) continue;
      const auto label = static_cast<std::uint32_t>(c.count++);
      c.labels[root] = label;
      stack.push_back(root);
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        auto visit = [&](std::uint32_t w) {
          if (c.labels[w] == kUnset) {
            c.labels[w] = label;
            stack.push_back(w);
          }
        };
        for (auto w : g.out_neighbors(v)) visit(w);
        for (auto w : g.in_neighbors(v)) visit(w);
      }
    }
    return c;
  }

  // Iterative Tarjan.
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), scc_stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (node, next edge offset)
  std::vector<std::uint32_t> raw(n, kUnset);
  std::uint32_t next_index = 0, raw_count = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    scc_stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      auto nbrs = g.out_neighbors(v);
      if (pos < nbrs.size()) {
        auto w = nbrs[pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          scc_stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const auto done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = false;
          raw[w] = raw_count;
        } while (w != done);
        ++raw_count;
      }
    }
  }
  // Relabel so labels follow the smallest member id.
  std::vector<std::uint32_t> relabel(raw_count, kUnset);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (relabel[raw[v]] == kUnset) relabel[raw[v]] = static_cast<std::uint32_t>(c.count++);
    c.labels[v] = relabel[raw[v]];
  }
  return c;
}

PathStats path_stats(const LinkGraph& g, PairSemantics semantics, unsigned threads) {
  PathStats ps;
  auto profiles = detail::level_profiles(
      g, semantics == PairSemantics::Directed ? Direction::Out : Direction::Undirected, threads);
  for (const auto& p : profiles) {
    ps.reachable_pairs += p.reached;
    ps.distance_sum += p.distance_sum;
    ps.diameter = std::max(ps.diameter, p.eccentricity);
  }
  ps.no_reachable_pairs = ps.reachable_pairs == 0;
  if (!ps.no_reachable_pairs) {
    ps.avg_path_length =
        static_cast<double>(ps.distance_sum) / static_cast<double>(ps.reachable_pairs);
  }
  return ps;
}

GraphMetrics graph_summary(const LinkGraph& g, const SummaryOptions& opts) {
  GraphMetrics gm;
  gm.nodes = g.node_count();
  gm.edges = g.edge_count();
  gm.pair_semantics = opts.pair_semantics;
  gm.component_mode = opts.component_mode;
  if (gm.nodes == 0) {
    gm.flags = flags::kEmptyGraph | flags::kNoReachablePairs;
    return gm;
  }
  const auto n = static_cast<double>(gm.nodes);
  gm.avg_degree = static_cast<double>(gm.edges) / n;
  gm.connected_components = connected_components(g, opts.component_mode).count;
  if (gm.nodes == 1) {
    gm.flags = flags::kSingleNode | flags::kNoReachablePairs;
    return gm;
  }
  gm.density = static_cast<double>(gm.edges) / (n * (n - 1.0));
  auto ps = path_stats(g, opts.pair_semantics, opts.threads);
  gm.avg_path_length = ps.avg_path_length;
  gm.diameter = ps.diameter;
  gm.reachable_pairs = ps.reachable_pairs;
  if (ps.no_reachable_pairs) gm.flags |= flags::kNoReachablePairs;
  return gm;
}

ScoreVector harmonic_closeness(const LinkGraph& g, Direction direction, unsigned threads) {
  ScoreVector sv;
  sv.metric = Metric::HarmonicCloseness;
  sv.params.direction = direction;
  const std::size_t n = g.node_count();
  sv.values.assign(n, 0.0);
  if (n < 2) return sv;
  auto profiles = detail::level_profiles(g, direction, threads);
  const double scale = static_cast<double>(n - 1);
  for (std::size_t v = 0; v < n; ++v) sv.values[v] = profiles[v].harmonic_sum / scale;
  return sv;
}

std::vector<std::uint32_t> sample_pivots(std::size_t n, std::size_t k, std::uint64_t seed) {
  k = std::min(k, n);
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with an explicit bounded draw (portable across
  // standard library implementations).
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t range = n - i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(pool[i], pool[i + r % range]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

ScoreVector betweenness(const LinkGraph& g, const BetweennessStrategy& strategy,
                        unsigned threads) {
  ScoreVector sv;
  sv.metric = Metric::Betweenness;
  const std::size_t n = g.node_count();
  const unsigned workers = resolve_threads(threads);

  std::vector<std::uint32_t> sources;
  Dep scale = 1.0L;
  if (const auto* s = std::get_if<SampledBetweenness>(&strategy); s && s->pivots < n) {
    if (s->pivots == 0) throw std::invalid_argument("sampled betweenness needs at least one pivot");
    sources = sample_pivots(n, s->pivots, s->seed);
    scale = static_cast<Dep>(n) / static_cast<Dep>(s->pivots);
    sv.params.pivots = s->pivots;
    sv.params.seed = s->seed;
  } else {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), 0u);
  }
  const auto dep = brandes(g, sources, workers);
  sv.values.reserve(n);
  for (auto v : dep) sv.values.push_back(static_cast<double>(v * scale));
  return sv;
}

ScoreVector pagerank(const LinkGraph& g, const PageRankOptions& opts, unsigned threads) {
  if (!(opts.damping > 0.0 && opts.damping < 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1)");
  }
  ScoreVector sv;
  sv.metric = Metric::PageRank;
  sv.params.damping = opts.damping;
  sv.params.tolerance = opts.tolerance;
  sv.params.max_iterations = opts.max_iterations;
  const std::size_t n = g.node_count();
  if (n == 0) {
    sv.params.iterations = 0;
    sv.params.converged = true;
    sv.params.final_delta = 0.0;
    return sv;
  }
  const unsigned workers = resolve_threads(threads);
  const double d = opts.damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, inv_n), next(n, 0.0), contrib(n, 0.0);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;

  double delta = 0.0;
  int iter = 0;
  bool converged = false;
  while (iter < opts.max_iterations) {
    ++iter;
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const auto deg = g.out_degree(static_cast<std::uint32_t>(u));
      if (deg == 0) {
        dangling += x[u];
        contrib[u] = 0.0;
      } else {
        contrib[u] = x[u] / static_cast<double>(deg);
      }
    }
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    parallel_for(chunks, workers, [&](std::size_t c) {
      const std::size_t end = std::min(n, (c + 1) * kChunk);
      for (std::size_t v = c * kChunk; v < end; ++v) {
        double sum = 0.0;
        for (auto u : g.in_neighbors(static_cast<std::uint32_t>(v))) sum += contrib[u];
        next[v] = base + d * sum;
      }
    });
    delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - x[v]);
    x.swap(next);
    if (delta < opts.tolerance) {
      converged = true;
      break;
    }
  }
  sv.values = std::move(x);
  sv.params.iterations = iter;
  sv.params.converged = converged;
  sv.params.final_delta = delta;
  return sv;
}

std::pair<ScoreVector, ScoreVector> degrees(const LinkGraph& g) {
  auto dv = degree_vectors(g);
  return {ScoreVector{Metric::InDegree, std::move(dv.in), {}},
          ScoreVector{Metric::OutDegree, std::move(dv.out), {}}};
}

namespace {
std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}
}  // namespace

double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
  if (a.size() < 2) return 1.0;
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return va == vb ? 1.0 : 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace darklink
