#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "darklink/domain.hpp"

using namespace darklink;

TEST_CASE("classify published address forms") {
  auto a = classify_domain("pejjyyh7rhv5ctyu.onion");
  REQUIRE(a);
  CHECK(a.domain->network == Network::Tor);
  CHECK(a.domain->kind == AddressKind::OnionV2);

  auto b = classify_domain("stats.i2p");
  REQUIRE(b);
  CHECK(b.domain->network == Network::I2p);
  CHECK(b.domain->kind == AddressKind::I2pNamed);

  auto c = classify_domain("example.com");
  CHECK_FALSE(c);
  CHECK(c.reason == InvalidReason::BadTld);

  auto d = classify_domain("HTTP://ZQKTLWI4FECVO6RI.onion/wiki/");
  REQUIRE(d);
  CHECK(d.domain->canonical == "zqktlwi4fecvo6ri.onion");
  CHECK(d.domain->kind == AddressKind::OnionV2);
  CHECK(d.domain->raw == "HTTP://ZQKTLWI4FECVO6RI.onion/wiki/");
}

TEST_CASE("classify kinds and reasons") {
  const std::string v3(56, 'a');
  auto a = classify_domain(v3 + ".onion");
  REQUIRE(a);
  CHECK(a.domain->kind == AddressKind::OnionV3);

  const std::string b32(52, 'q');
  auto b = classify_domain(b32 + ".b32.i2p");
  REQUIRE(b);
  CHECK(b.domain->kind == AddressKind::I2pB32);
  CHECK(b.domain->network == Network::I2p);

  CHECK(classify_domain("abc.b32.i2p").reason == InvalidReason::BadLength);
  CHECK(classify_domain("abcdefghijklmno.onion").reason == InvalidReason::BadLength);
  CHECK(classify_domain("abcdefghijklmn01.onion").reason == InvalidReason::BadAlphabet);
  CHECK(classify_domain("").reason == InvalidReason::Empty);
  CHECK(classify_domain("   ").reason == InvalidReason::Empty);

  auto multi = classify_domain("forum.example.i2p");
  REQUIRE(multi);
  CHECK(multi.domain->canonical == "forum.example.i2p");

  auto port = classify_domain("  http://user@Stats.I2P:8080/path?q#f ");
  REQUIRE(port);
  CHECK(port.domain->canonical == "stats.i2p");
}

TEST_CASE("truncated table names are never valid") {
  CHECK_FALSE(classify_domain("dhosting4xxoydyaiv...syd.onion"));
  CHECK_FALSE(classify_domain("dhosting4xxoydyaiv\xE2\x80\xA6syd.onion"));
}

TEST_CASE("classify is idempotent on canonical output") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz234567ABC.-:/019 ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 70);
  const char* tlds[] = {".onion", ".i2p", ".b32.i2p", ".com", ""};
  int valid = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    int l = len(rng);
    for (int k = 0; k < l; ++k) s += alphabet[pick(rng)];
    s += tlds[i % 5];
    auto c = classify_domain(s);
    if (!c) continue;
    ++valid;
    auto again = classify_domain(c.domain->canonical);
    REQUIRE(again);
    CHECK(again.domain->canonical == c.domain->canonical);
    CHECK(again.domain->kind == c.domain->kind);
    CHECK(network_of(c.domain->kind) == c.domain->network);
  }
  CHECK(valid > 0);
}

TEST_CASE("extract domains from text") {
  auto r = extract_domains("visit http://zqktlwi4fecvo6ri.onion now");
  REQUIRE(r.size() == 1);
  CHECK(r[0].domain.canonical == "zqktlwi4fecvo6ri.onion");
  CHECK(r[0].offset == 6);

  CHECK(extract_domains("").empty());

  const std::string text =
      "lists: pejjyyh7rhv5ctyu.onion, see stats.i2p; broken abcdefghijklmno.onion end";
  auto m = extract_domains(text);
  REQUIRE(m.size() == 2);
  CHECK(m[0].domain.canonical == "pejjyyh7rhv5ctyu.onion");
  CHECK(m[1].domain.canonical == "stats.i2p");
  CHECK(text.substr(m[0].offset, 22) == "pejjyyh7rhv5ctyu.onion");
  CHECK(text.substr(m[1].offset, 9) == "stats.i2p");

  auto dup = extract_domains("stats.i2p stats.i2p");
  CHECK(dup.size() == 2);
}

TEST_CASE("extract offsets shift under concatenation") {
  const std::string t1 = "prefix stats.i2p and pejjyyh7rhv5ctyu.onion ";
  const std::string t2 = "then http://zqktlwi4fecvo6ri.onion/x and proxy.i2p.";
  auto whole = extract_domains(t1 + t2);
  auto first = extract_domains(t1);
  auto second = extract_domains(t2);
  REQUIRE(whole.size() == first.size() + second.size());
  for (std::size_t i = 0; i < second.size(); ++i) {
    const auto& w = whole[first.size() + i];
    CHECK(w.offset == second[i].offset + t1.size());
    CHECK(w.domain == second[i].domain);
  }
}

TEST_CASE("string conversions round trip") {
  for (auto k : {AddressKind::OnionV2, AddressKind::OnionV3, AddressKind::I2pNamed,
                 AddressKind::I2pB32}) {
    CHECK(parse_address_kind(to_string(k)) == k);
  }
  for (auto n : {Network::Tor, Network::I2p}) CHECK(parse_network(to_string(n)) == n);
  CHECK(onion_body_length(AddressKind::OnionV2) == 16);
  CHECK(onion_body_length(AddressKind::OnionV3) == 56);
  CHECK(is_base32_char('a'));
  CHECK(is_base32_char('7'));
  CHECK_FALSE(is_base32_char('1'));
  CHECK_FALSE(is_base32_char('A'));
}
