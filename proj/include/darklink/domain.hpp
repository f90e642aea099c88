// Darknet hostname classification and extraction.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace darklink {

enum class Network : unsigned char { Tor, I2p };

enum class AddressKind : unsigned char { OnionV2, OnionV3, I2pNamed, I2pB32 };

enum class InvalidReason : unsigned char { BadTld, BadLength, BadAlphabet, Empty };

/// A classified darknet hostname. Identity (equality, ordering) is the
/// canonical string; `raw` keeps the first spelling seen in the source.
struct Domain {
  std::string raw;
  std::string canonical;
  Network network = Network::Tor;
  AddressKind kind = AddressKind::OnionV2;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.canonical == b.canonical && a.kind == b.kind;
  }
  friend bool operator<(const Domain& a, const Domain& b) {
    return a.canonical < b.canonical;
  }
};

/// Result of classify_domain. Exactly one of `domain` / `reason` is set.
struct Classification {
  std::optional<Domain> domain;
  std::optional<InvalidReason> reason;

  explicit operator bool() const { return domain.has_value(); }
};

/// Normalizes `name` (trims, lowercases, strips scheme, userinfo, port,
/// path) and classifies it as a Tor or i2p address. Never throws.
Classification classify_domain(std::string_view name);

struct ExtractedDomain {
  Domain domain;
  std::size_t offset = 0;  // byte offset of the match in the input text
};

/// Finds every darknet address in free text, in document order, duplicates
/// retained. A match starts at its URL scheme when one immediately precedes
/// the host.
std::vector<ExtractedDomain> extract_domains(std::string_view text);

Network network_of(AddressKind kind);

std::string_view to_string(Network net);
std::string_view to_string(AddressKind kind);
std::string_view to_string(InvalidReason reason);

std::optional<Network> parse_network(std::string_view s);
std::optional<AddressKind> parse_address_kind(std::string_view s);

/// Length of the base32 body for onion kinds (16 or 56).
std::size_t onion_body_length(AddressKind kind);

bool is_base32_char(char c);

}  // namespace darklink
