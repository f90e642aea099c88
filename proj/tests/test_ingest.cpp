#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "darklink/ingest.hpp"

using namespace darklink;
namespace fs = std::filesystem;

namespace {

const std::string A = "aaaaaaaaaaaaaaaa.onion";
const std::string B = "bbbbbbbbbbbbbbbb.onion";
const std::string C = "cccccccccccccccc.onion";

RawRecord edge(std::string s, std::string d, std::size_t line = 1) {
  return RawRecord{"t", std::move(s), std::move(d), line};
}

RawRecord node(std::string s, std::size_t line = 1) {
  return RawRecord{"t", std::move(s), std::nullopt, line};
}

fs::path temp_file(const std::string& name) {
  auto dir = fs::temp_directory_path() / "darklink_test_ingest";
  fs::create_directories(dir);
  return dir / name;
}

void conservation(const Dataset& d) {
  CHECK(d.edges.size() + d.stats.dropped_duplicates + d.stats.dropped_self_loops +
            d.stats.dropped_non_darknet + d.stats.dropped_invalid ==
        d.stats.edge_records);
  CHECK(d.stats.edge_records + d.stats.node_records == d.stats.raw_records);
}

}  // namespace

TEST_CASE("parse two-line csv") {
  auto r = parse_edge_list(A + "," + B + "\n" + B + "," + A, EdgeFormat{});
  CHECK(r.errors.empty());
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].src == A);
  CHECK(r.records[0].dst == B);
  CHECK(r.records[1].line == 2);
}

TEST_CASE("header, comments and blank lines") {
  auto fmt = EdgeFormat::canonical_csv();
  auto r = parse_edge_list("src,dst\n# note\n\n" + A + "," + B + "\n", fmt);
  CHECK(r.errors.empty());
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].line == 4);
}

TEST_CASE("tsv and column selection") {
  EdgeFormat fmt{'\t', 2, 0, false, "#"};
  auto r = parse_edge_list("x\ty\tz\n" + B + "\tjunk\t" + A + "\n", fmt);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].src == A);
  CHECK(r.records[1].dst == B);

  EdgeFormat nodes{',', 0, std::nullopt, false, "#"};
  auto n = parse_edge_list(A + "\n" + B + ",ignored\n", nodes);
  REQUIRE(n.records.size() == 2);
  CHECK_FALSE(n.records[0].dst.has_value());
}

TEST_CASE("malformed lines are reported with line numbers") {
  auto r = parse_edge_list(A + "\n\"" + A + "," + B + "\n," + B + "\n" + A + ",\xff\xfe\n",
                           EdgeFormat{});
  CHECK(r.records.empty());
  REQUIRE(r.errors.size() == 4);
  CHECK(r.errors[0].line == 1);
  CHECK(r.errors[0].reason == "missing-column");
  CHECK(r.errors[1].reason == "unterminated-quote");
  CHECK(r.errors[2].reason == "empty-src");
  CHECK(r.errors[3].line == 4);
  CHECK(r.errors[3].reason == "invalid-utf8");
}

TEST_CASE("empty dst field is a node-only record") {
  auto r = parse_edge_list(A + ",\n", EdgeFormat{});
  REQUIRE(r.records.size() == 1);
  CHECK_FALSE(r.records[0].dst.has_value());
}

TEST_CASE("load_edge_list reads files and reports unreadable ones") {
  auto p = temp_file("two.csv");
  {
    std::ofstream f(p);
    f << A << "," << B << "\n" << B << "," << A << "\n";
  }
  auto r = load_edge_list(p, EdgeFormat{});
  CHECK(r.records.size() == 2);
  CHECK(r.records[0].source_id == p.string());
  CHECK_THROWS_AS(load_edge_list(temp_file("missing.csv"), EdgeFormat{}), IoError);
}

TEST_CASE("normalize drops duplicates and self-loops") {
  auto d = normalize({edge(A, B), edge(A, B), edge(A, A)});
  REQUIRE(d.nodes.size() == 2);
  CHECK(d.nodes[0].canonical == A);
  CHECK(d.nodes[1].canonical == B);
  REQUIRE(d.edges.size() == 1);
  CHECK(d.edges[0] == Edge{0, 1});
  CHECK(d.stats.dropped_duplicates == 1);
  CHECK(d.stats.dropped_self_loops == 1);
  conservation(d);
}

TEST_CASE("non-darknet endpoint drops the edge") {
  auto d = normalize({edge(A, "example.com")});
  CHECK(d.nodes.empty());
  CHECK(d.edges.empty());
  CHECK(d.stats.dropped_non_darknet == 1);

  auto kept = normalize({edge(A, "example.com"), node(A)});
  REQUIRE(kept.nodes.size() == 1);
  CHECK(kept.nodes[0].canonical == A);
  conservation(kept);

  auto bad = normalize({edge(A, "abc.onion")});
  CHECK(bad.stats.dropped_invalid == 1);
  CHECK(bad.nodes.empty());
}

TEST_CASE("case and url variants collapse to one edge") {
  std::vector<Reject> rejects;
  auto d = normalize({edge("http://AAAAAAAAAAAAAAAA.onion/x", B), edge(A, "BBBBBBBBBBBBBBBB.ONION:80")},
                     &rejects);
  CHECK(d.edges.size() == 1);
  CHECK(d.stats.dropped_duplicates == 1);
  REQUIRE(rejects.size() == 1);
  CHECK(rejects[0].reason == "duplicate");
  CHECK(d.nodes[0].raw == "http://AAAAAAAAAAAAAAAA.onion/x");
}

TEST_CASE("normalize is idempotent through to_records") {
  auto d = normalize({edge(A, B), edge(B, C), edge(C, A), node("stats.i2p")});
  auto again = normalize(to_records(d));
  CHECK(again == d);
  CHECK(again.nodes.size() == 4);
}

TEST_CASE("merge identities") {
  auto x = normalize({edge(A, B), edge(B, C)});
  Dataset empty;
  CHECK(merge(x, empty) == x);
  CHECK(merge(empty, x) == x);
  CHECK(merge(x, x) == x);
  CHECK(merge(x, x).stats.raw_records == 2 * x.stats.raw_records);

  auto one = normalize({edge(A, B)});
  auto two = normalize({edge(B, C)});
  auto m = merge(one, two);
  CHECK(m.nodes.size() == 3);
  CHECK(m.edges.size() == 2);
  CHECK(m == x);
}

TEST_CASE("write and reload round trip") {
  auto tri = normalize({edge(A, B), edge(B, C), edge(C, A), node("stats.i2p")});
  auto p = temp_file("tri.csv");
  write_dataset(tri, p);
  auto back = read_dataset(p);
  CHECK(back == tri);

  auto p2 = temp_file("tri2.csv");
  write_dataset(back, p2);
  std::ifstream f1(p), f2(p2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(s1.str() == "src,dst\n" + A + "," + B + "\n" + B + "," + C + "\n" + C + "," + A +
                        "\nstats.i2p,\n");

  CHECK(format_dataset(Dataset{}) == "src,dst\n");
  CHECK_THROWS_AS(write_dataset(tri, temp_file("nodir") / "x" / "y.csv"), IoError);
}

TEST_CASE("rejects log format") {
  std::vector<Reject> rejects;
  normalize({edge(A, A, 3), edge(A, "x,y.com", 4)}, &rejects);
  CHECK(format_rejects(rejects) ==
        "line,reason,raw\n3,self-loop,\"" + A + "," + A + "\"\n4,non-darknet,\"" + A +
            ",x,y.com\"\n");
}

TEST_CASE("fuzzed records keep the conservation identity") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pool = {A, B, C, "stats.i2p", "HTTP://" + A + "/p",
                                         "example.com", "abc.onion", "", " ", "a..i2p",
                                         std::string(52, 'z') + ".b32.i2p", "x.b32.i2p",
                                         "\xff.onion", "proxy.i2p:4444"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<RawRecord> records;
  for (std::size_t i = 0; i < 5000; ++i) {
    if (i % 7 == 0) records.push_back(node(pool[pick(rng)], i + 1));
    else records.push_back(edge(pool[pick(rng)], pool[pick(rng)], i + 1));
  }
  std::vector<Reject> rejects;
  auto d = normalize(records, &rejects);
  conservation(d);
  CHECK(rejects.size() == d.stats.dropped_duplicates + d.stats.dropped_self_loops +
                              d.stats.dropped_non_darknet + d.stats.dropped_invalid +
                              d.stats.dropped_node_records);
}
