#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "darklink/metrics.hpp"
#include "darklink/probegen.hpp"
#include "support.hpp"

using namespace darklink;
using testing::make_graph;
using testing::closeness_from;
using testing::path_from;
using testing::transpose;

namespace {
double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("directed 3-cycle summary") {
  auto g = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  auto s = graph_summary(g);
  CHECK(s.nodes == 3);
  CHECK(s.edges == 3);
  CHECK(s.avg_degree == 1.0);
  CHECK(s.density == 0.5);
  CHECK(s.avg_path_length == 1.5);
  CHECK(s.diameter == 2);
  CHECK(s.connected_components == 1);
  CHECK(s.flags == 0);
}

TEST_CASE("degenerate summaries are flagged") {
  auto empty = graph_summary(make_graph(0, {}));
  CHECK((empty.flags & flags::kEmptyGraph) != 0);
  CHECK(empty.nodes == 0);
  CHECK(empty.avg_degree == 0.0);
  auto one = graph_summary(make_graph(1, {}));
  CHECK((one.flags & flags::kSingleNode) != 0);
  CHECK(one.connected_components == 1);
  CHECK(one.avg_path_length == 0.0);
  auto none = graph_summary(make_graph(3, {}));
  CHECK((none.flags & flags::kNoReachablePairs) != 0);
  CHECK(none.connected_components == 3);
}

TEST_CASE("components") {
  auto two = make_graph(4, {{0, 1}, {2, 3}});
  CHECK(connected_components(two, ComponentMode::Weak).count == 2);
  auto path = make_graph(3, {{0, 1}, {1, 2}});
  CHECK(connected_components(path, ComponentMode::Weak).count == 1);
  auto strong = connected_components(path, ComponentMode::Strong);
  CHECK(strong.count == 3);
  CHECK(strong.labels == std::vector<std::uint32_t>{0, 1, 2});
  auto mixed = make_graph(5, {{3, 4}, {4, 3}, {0, 3}, {1, 2}});
  auto w = connected_components(mixed, ComponentMode::Weak);
  CHECK(w.labels == std::vector<std::uint32_t>{0, 1, 1, 0, 0});
}

TEST_CASE("path a->b->c") {
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  auto p = path_stats(g, PairSemantics::Directed);
  CHECK(p.avg_path_length == 4.0 / 3.0);
  CHECK(p.diameter == 2);
  CHECK(p.reachable_pairs == 3);
  auto u = path_stats(g, PairSemantics::Undirected);
  CHECK(u.reachable_pairs == 6);

  auto c = harmonic_closeness(g, Direction::Out);
  CHECK(c.values[0] == 0.75);
  CHECK(c.values[2] == 0.0);
  auto ci = harmonic_closeness(g, Direction::In);
  CHECK(ci.values[2] == 0.75);

  auto b = betweenness(g);
  CHECK(b.values == std::vector<double>{0, 1, 0});
}

TEST_CASE("isolated node closeness is zero") {
  auto g = make_graph(3, {{0, 1}});
  CHECK(harmonic_closeness(g, Direction::Undirected).values[2] == 0.0);
}

TEST_CASE("pagerank small cases") {
  auto one = pagerank(make_graph(1, {}));
  CHECK(one.values == std::vector<double>{1.0});
  auto two = pagerank(make_graph(2, {{0, 1}, {1, 0}}));
  CHECK(two.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.params.converged == true);
  CHECK_THROWS(pagerank(make_graph(2, {}), PageRankOptions{1.0, 1e-9, 200}));
  CHECK_THROWS(pagerank(make_graph(2, {}), PageRankOptions{0.0, 1e-9, 200}));

  auto slow = pagerank(make_graph(3, {{0, 1}, {1, 2}}), PageRankOptions{0.85, 1e-30, 3});
  CHECK(slow.params.converged == false);
  CHECK(slow.params.iterations == 3);
  CHECK(slow.params.final_delta.value() > 0.0);
}

TEST_CASE("oracle equivalence on random digraphs n <= 8") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> dens(0.05, 0.6);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testing::random_digraph(rng, size(rng), dens(rng));
    CAPTURE(trial);
    auto dm = oracle_all_pairs(g);
    auto du = oracle_all_pairs(g, true);

    CHECK(betweenness(g, ExactBetweenness{}, 3).values == oracle_betweenness(g).values);
    CHECK(harmonic_closeness(g, Direction::Out, 2).values == closeness_from(dm));
    CHECK(harmonic_closeness(g, Direction::In, 2).values == closeness_from(transpose(dm)));
    CHECK(harmonic_closeness(g, Direction::Undirected, 2).values == closeness_from(du));

    auto p = path_stats(g, PairSemantics::Directed, 2);
    auto q = path_from(dm);
    CHECK(p.avg_path_length == q.avg_path_length);
    CHECK(p.diameter == q.diameter);
    CHECK(p.reachable_pairs == q.reachable_pairs);
    CHECK(p.distance_sum == q.distance_sum);
    auto pu = path_stats(g, PairSemantics::Undirected, 2);
    CHECK(pu.avg_path_length == path_from(du).avg_path_length);

    CHECK(linf(pagerank(g, {}, 2).values, oracle_pagerank(g).values) <= 1e-8);
  }
}

TEST_CASE("oracles agree on larger random graphs") {
  std::mt19937_64 rng(77);
  for (std::size_t n : {10u, 50u}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto g = testing::random_digraph(rng, n, 3.0 / static_cast<double>(n));
      auto dm = oracle_all_pairs(g);
      auto p = path_stats(g, PairSemantics::Directed);
      CHECK(p.avg_path_length == path_from(dm).avg_path_length);
      CHECK(p.diameter == path_from(dm).diameter);
      CHECK(harmonic_closeness(g, Direction::Out).values == closeness_from(dm));
      CHECK(linf(pagerank(g).values, oracle_pagerank(g).values) <= 1e-8);
    }
  }
}

TEST_CASE("oracle guardrails") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(oracle_betweenness(testing::random_digraph(rng, 11, 0.2)), GuardrailError);
  CHECK_THROWS_AS(oracle_pagerank(testing::random_digraph(rng, 201, 0.01)), GuardrailError);
  CHECK_THROWS_AS(oracle_all_pairs(testing::random_digraph(rng, 513, 0.001)), GuardrailError);
}

TEST_CASE("metric invariants on random graphs") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 20 + trial * 3;
    auto g = testing::random_digraph(rng, n, 2.0 / static_cast<double>(n));
    auto pr = pagerank(g);
    double sum = std::accumulate(pr.values.begin(), pr.values.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-6);
    for (double v : pr.values) CHECK(v >= (1.0 - 0.85) / static_cast<double>(n) - 1e-15);

    auto b = betweenness(g);
    for (std::uint32_t v = 0; v < n; ++v) {
      CHECK(b.values[v] >= 0.0);
      if (g.in_degree(v) == 0 || g.out_degree(v) == 0) CHECK(b.values[v] == 0.0);
    }
    auto c = harmonic_closeness(g, Direction::Out);
    for (double v : c.values) CHECK((v >= 0.0 && v <= 1.0));

    CHECK(connected_components(g, ComponentMode::Weak).count <=
          connected_components(g, ComponentMode::Strong).count);
    auto s = graph_summary(g);
    if (!(s.flags & flags::kNoReachablePairs)) CHECK(s.diameter >= s.avg_path_length);
    CHECK((s.density >= 0.0 && s.density <= 1.0));
  }
}

TEST_CASE("closeness is monotone under edge addition") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint32_t> node(0, 14);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  auto prev = harmonic_closeness(make_graph(15, pairs), Direction::Out).values;
  for (int step = 0; step < 60; ++step) {
    auto u = node(rng), v = node(rng);
    if (u == v) continue;
    pairs.emplace_back(u, v);
    auto cur = harmonic_closeness(make_graph(15, pairs), Direction::Out).values;
    for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] >= prev[i]);
    prev = cur;
  }
}

TEST_CASE("results are identical across thread counts") {
  std::mt19937_64 rng(99);
  auto g = testing::random_digraph(rng, 300, 4.0 / 300.0);
  auto base_b = betweenness(g, ExactBetweenness{}, 1).values;
  auto base_c = harmonic_closeness(g, Direction::Out, 1).values;
  auto base_p = pagerank(g, {}, 1).values;
  auto base_s = betweenness(g, SampledBetweenness{40, 5}, 1).values;
  auto base_path = path_stats(g, PairSemantics::Directed, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    CHECK(betweenness(g, ExactBetweenness{}, t).values == base_b);
    CHECK(harmonic_closeness(g, Direction::Out, t).values == base_c);
    CHECK(pagerank(g, {}, t).values == base_p);
    CHECK(betweenness(g, SampledBetweenness{40, 5}, t).values == base_s);
    CHECK(path_stats(g, PairSemantics::Directed, t).avg_path_length == base_path.avg_path_length);
  }
}

TEST_CASE("sampled betweenness") {
  std::mt19937_64 rng(4);
  auto g = testing::random_digraph(rng, 60, 0.05);
  CHECK(betweenness(g, SampledBetweenness{60, 1}).values == betweenness(g).values);
  CHECK(betweenness(g, SampledBetweenness{500, 1}).values == betweenness(g).values);
  CHECK_THROWS(betweenness(g, SampledBetweenness{0, 1}));
  auto s = betweenness(g, SampledBetweenness{20, 9});
  CHECK(s.params.pivots == 20u);
  CHECK(s.params.seed == 9u);

  auto piv = sample_pivots(100, 30, 3);
  CHECK(piv.size() == 30);
  CHECK(std::is_sorted(piv.begin(), piv.end()));
  CHECK(std::adjacent_find(piv.begin(), piv.end()) == piv.end());
  CHECK(piv == sample_pivots(100, 30, 3));
  CHECK(piv != sample_pivots(100, 30, 4));
}

TEST_CASE("spearman correlation") {
  CHECK(spearman_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_correlation({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman_correlation({1, 1, 2}, {1, 1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("enum names round trip") {
  for (auto m : {Metric::InDegree, Metric::OutDegree, Metric::HarmonicCloseness,
                 Metric::Betweenness, Metric::PageRank})
    CHECK(parse_metric(to_string(m)) == m);
  for (auto d : {Direction::Out, Direction::In, Direction::Undirected})
    CHECK(parse_direction(to_string(d)) == d);
  CHECK(parse_component_mode("strong") == ComponentMode::Strong);
  CHECK(parse_pair_semantics("undirected") == PairSemantics::Undirected);
  CHECK_FALSE(parse_metric("nope"));
}
