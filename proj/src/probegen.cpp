#include "darklink/probegen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_set>

namespace darklink {
namespace {

constexpr std::string_view kBase32 = "abcdefghijklmnopqrstuvwxyz234567";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  char base32() { return kBase32[engine_() >> 59]; }

 private:
  std::mt19937_64 engine_;
};

// Prefix sums over mutable non-negative weights with O(log n) sampling.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    weight_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }
  double total() const {
    double s = 0.0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }
  // Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = std::bit_floor(tree_.size() - 1);
    for (; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return std::min(pos, weight_.size() - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
};

void require_guardrail(const LinkGraph& g, std::size_t limit, const char* what) {
  if (g.node_count() > limit) {
    throw GuardrailError(std::string(what) + ": graph has " + std::to_string(g.node_count()) +
                         " nodes, limit " + std::to_string(limit));
  }
}

std::string random_body(Rng& rng, std::size_t len) {
  std::string s(len, 'a');
  for (auto& c : s) c = rng.base32();
  return s;
}

// Unique synthetic names per network. Tor: mostly v2 with every eighth
// address v3. i2p: mostly short named hosts with every fifth a b32 name.
std::vector<std::string> synth_names(Rng& rng, std::size_t count, Network net,
                                     std::unordered_set<std::string>& taken) {
  std::vector<std::string> names;
  names.reserve(count);
  while (names.size() < count) {
    std::string name;
    const auto i = names.size();
    if (net == Network::Tor) {
      name = random_body(rng, i % 8 == 7 ? 56 : 16) + ".onion";
    } else if (i % 5 == 4) {
      name = random_body(rng, 52) + ".b32.i2p";
    } else {
      name = random_body(rng, 10) + ".i2p";
    }
    if (taken.insert(name).second) names.push_back(std::move(name));
  }
  return names;
}

struct Fraction {
  __int128 num = 0;
  __int128 den = 1;

  void add(__int128 n, __int128 d) {
    num = num * d + n * den;
    den *= d;
    auto g = gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const {
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
  }
  static __int128 gcd(__int128 a, __int128 b) {
    while (b != 0) {
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
};

}  // namespace

std::string_view to_string(KeywordPosition p) {
  switch (p) {
    case KeywordPosition::Prefix: return "prefix";
    case KeywordPosition::Suffix: return "suffix";
    case KeywordPosition::Anywhere: return "anywhere";
  }
  return "?";
}

std::optional<KeywordPosition> parse_keyword_position(std::string_view s) {
  if (s == "prefix") return KeywordPosition::Prefix;
  if (s == "suffix") return KeywordPosition::Suffix;
  if (s == "anywhere") return KeywordPosition::Anywhere;
  return std::nullopt;
}

CandidateSet generate_candidates(const CandidateSpec& spec) {
  if (spec.kind != AddressKind::OnionV2 && spec.kind != AddressKind::OnionV3) {
    throw std::invalid_argument("candidates are onion addresses (v2 or v3)");
  }
  if (spec.keyword.empty() ||
      !std::all_of(spec.keyword.begin(), spec.keyword.end(), is_base32_char)) {
    throw std::invalid_argument("keyword must be non-empty base32 [a-z2-7]: " + spec.keyword);
  }
  const std::size_t body = onion_body_length(spec.kind);
  const std::size_t k = spec.keyword.size();
  if (k > body) throw std::invalid_argument("keyword longer than the address body");

  CandidateSet out;
  if (spec.count == 0) return out;
  const std::size_t free = body - k;
  const std::size_t offsets = spec.position == KeywordPosition::Anywhere ? free + 1 : 1;

  // Upper bound on distinct addresses when it is small enough to matter.
  std::optional<std::uint64_t> capacity;
  if (free * 5 < 40) capacity = (std::uint64_t{1} << (free * 5)) * offsets;

  Rng rng(spec.seed);
  std::unordered_set<std::string> seen;
  std::size_t misses = 0;
  const std::size_t miss_limit = 10000 + 50 * spec.count;
  while (out.domains.size() < spec.count) {
    if (capacity && seen.size() >= *capacity) break;
    std::size_t offset = 0;
    if (spec.position == KeywordPosition::Suffix) offset = free;
    if (spec.position == KeywordPosition::Anywhere) offset = rng.below(free + 1);
    std::string addr = random_body(rng, free);
    addr.insert(offset, spec.keyword);
    addr += ".onion";
    if (!seen.insert(addr).second) {
      if (++misses > miss_limit) break;
      continue;
    }
    auto cls = classify_domain(addr);
    out.domains.push_back(std::move(*cls.domain));
  }
  out.exhausted = out.domains.size() < spec.count;
  return out;
}

std::vector<Domain> check_membership(const std::vector<Domain>& candidates, const Dataset& known) {
  std::vector<Domain> hits;
  for (const auto& c : candidates) {
    if (known.contains(c.canonical)) hits.push_back(c);
  }
  return hits;
}

std::size_t synth_edge_count(const SynthSpec& spec) {
  const double n = static_cast<double>(spec.n_i2p + spec.n_tor);
  return static_cast<std::size_t>(std::llround(spec.target_avg_degree * n));
}

Dataset synth_graph(const SynthSpec& spec) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(spec.hub_fraction) || !in_unit(spec.cross_edge_prob)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  if (!(spec.target_avg_degree >= 0.0) || !std::isfinite(spec.attachment_exponent)) {
    throw std::invalid_argument("invalid degree target or attachment exponent");
  }
  const std::size_t n = spec.n_i2p + spec.n_tor;
  if (n == 0) return Dataset{};
  if (spec.target_avg_degree > static_cast<double>(n - 1)) {
    throw std::invalid_argument("target average degree exceeds n - 1");
  }

  Rng rng(spec.seed);
  std::unordered_set<std::string> taken;
  // Global index space: i2p nodes first, then Tor.
  std::vector<std::string> names = synth_names(rng, spec.n_i2p, Network::I2p, taken);
  auto tor = synth_names(rng, spec.n_tor, Network::Tor, taken);
  names.insert(names.end(), std::make_move_iterator(tor.begin()), std::make_move_iterator(tor.end()));

  struct Side {
    std::size_t offset, size;
  };
  const Side sides[2] = {{0, spec.n_i2p}, {spec.n_i2p, spec.n_tor}};
  auto side_of = [&](std::size_t v) { return v < spec.n_i2p ? 0 : 1; };

  std::vector<std::size_t> hubs;
  for (const auto& s : sides) {
    if (s.size == 0 || spec.hub_fraction == 0.0) continue;
    auto h = std::max<std::size_t>(1, static_cast<std::size_t>(
                                          std::ceil(spec.hub_fraction * static_cast<double>(s.size))));
    for (std::size_t i = 0; i < std::min(h, s.size); ++i) hubs.push_back(s.offset + i);
  }

  std::vector<Fenwick> attract;
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::size_t> outdeg(n, 0);
  Fenwick emit(n);
  for (std::size_t v = 0; v < n; ++v) emit.set(v, 1.0);
  for (const auto& s : sides) {
    attract.emplace_back(std::max<std::size_t>(s.size, 1));
    for (std::size_t i = 0; i < s.size; ++i) attract.back().set(i, 1.0);
  }
  auto weight = [&](std::size_t d) {
    return std::pow(static_cast<double>(d + 1), spec.attachment_exponent);
  };

  const std::size_t m = synth_edge_count(spec);
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(m * 2);
  std::vector<RawRecord> records;
  records.reserve(m);
  const std::size_t max_attempts = 1000;

  for (std::size_t e = 0; e < m; ++e) {
    bool placed = false;
    const bool cross_draw = rng.unit() < spec.cross_edge_prob;
    for (std::size_t attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      std::size_t src = (!hubs.empty() && rng.next() >> 63) ? hubs[rng.below(hubs.size())]
                                                             : emit.find(rng.unit() * emit.total());
      const int own = side_of(src);
      const bool cross = cross_draw && sides[1 - own].size > 0;
      const int target_side = cross ? 1 - own : own;
      const auto& side = sides[target_side];
      if (side.size == 0 || (!cross && side.size < 2)) continue;
      auto& tree = attract[target_side];
      for (int tries = 0; tries < 32; ++tries) {
        const std::size_t dst = side.offset + tree.find(rng.unit() * tree.total());
        if (dst == src) continue;
        const auto key = (std::uint64_t{src} << 32) | dst;
        if (!edges.insert(key).second) continue;
        ++indeg[dst];
        tree.set(dst - side.offset, weight(indeg[dst]));
        ++outdeg[src];
        emit.set(src, weight(outdeg[src]));
        records.push_back({"synth", names[src], names[dst], e + 1});
        placed = true;
        break;
      }
    }
    if (!placed) throw std::invalid_argument("synthetic spec too dense to place all edges");
  }
  // Nodes that ended up without edges still belong to the dataset.
  std::vector<bool> touched(n, false);
  for (auto key : edges) {
    touched[key >> 32] = true;
    touched[key & 0xffffffffu] = true;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!touched[v]) records.push_back({"synth", names[v], std::nullopt, m + v + 1});
  }
  return normalize(records);
}

DistanceMatrix oracle_all_pairs(const LinkGraph& g, bool undirected) {
  require_guardrail(g, 512, "oracle_all_pairs");
  const std::size_t n = g.node_count();
  DistanceMatrix dm;
  dm.n = n;
  dm.data.assign(n * n, DistanceMatrix::kUnreachable);
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    dm.data[s * n + s] = 0;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      std::vector<std::uint32_t> next(g.out_neighbors(static_cast<std::uint32_t>(u)).begin(),
                                      g.out_neighbors(static_cast<std::uint32_t>(u)).end());
      if (undirected) {
        auto in = g.in_neighbors(static_cast<std::uint32_t>(u));
        next.insert(next.end(), in.begin(), in.end());
      }
      for (auto w : next) {
        if (dm.data[s * n + w] == DistanceMatrix::kUnreachable) {
          dm.data[s * n + w] = dm.data[s * n + u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return dm;
}

ScoreVector oracle_betweenness(const LinkGraph& g) {
  require_guardrail(g, 10, "oracle_betweenness");
  const std::size_t n = g.node_count();
  const auto dist = oracle_all_pairs(g);
  std::vector<Fraction> total(n);

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || dist.at(s, t) == DistanceMatrix::kUnreachable) continue;
      // Enumerate every path s -> t of length d(s,t); each is a shortest path.
      const int len = dist.at(s, t);
      std::vector<std::size_t> path{s};
      std::vector<long long> through(n, 0);
      long long paths = 0;
      auto walk = [&](auto&& self, std::size_t u) -> void {
        if (static_cast<int>(path.size()) - 1 == len) {
          if (u == t) {
            ++paths;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
          }
          return;
        }
        for (auto w : g.out_neighbors(static_cast<std::uint32_t>(u))) {
          path.push_back(w);
          self(self, w);
          path.pop_back();
        }
      };
      walk(walk, s);
      for (std::size_t v = 0; v < n; ++v) {
        if (through[v] > 0) total[v].add(through[v], paths);
      }
    }
  }
  ScoreVector sv;
  sv.metric = Metric::Betweenness;
  for (const auto& f : total) sv.values.push_back(f.value());
  return sv;
}

ScoreVector oracle_pagerank(const LinkGraph& g, double damping) {
  require_guardrail(g, 200, "oracle_pagerank");
  const std::size_t n = g.node_count();
  ScoreVector sv;
  sv.metric = Metric::PageRank;
  sv.params.damping = damping;
  if (n == 0) return sv;
  // (I - d M) x = (1 - d)/n, M column-stochastic with dangling columns uniform.
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1, 0.0L));
  const long double dn = static_cast<long double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 1.0L;
    a[i][n] = (1.0L - damping) / dn;
  }
  for (std::size_t u = 0; u < n; ++u) {
    auto out = g.out_neighbors(static_cast<std::uint32_t>(u));
    if (out.empty()) {
      for (std::size_t v = 0; v < n; ++v) a[v][u] -= damping / dn;
    } else {
      for (auto v : out) a[v][u] -= damping / static_cast<long double>(out.size());
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0L) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) sv.values.push_back(static_cast<double>(a[i][n] / a[i][i]));
  return sv;
}

}  // namespace darklink
