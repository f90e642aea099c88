#include "darklink/domain.hpp"

#include <algorithm>
#include <array>

namespace darklink {
namespace {

constexpr std::string_view kOnionSuffix = ".onion";
constexpr std::string_view kB32Suffix = ".b32.i2p";
constexpr std::string_view kI2pSuffix = ".i2p";
constexpr std::size_t kB32BodyLength = 52;
constexpr std::size_t kMaxHostLength = 253;
constexpr std::size_t kMaxLabelLength = 63;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

bool is_host_char(char c) { return is_alnum(c) || c == '-' || c == '.'; }
bool is_scheme_char(char c) { return is_alnum(c) || c == '+' || c == '-' || c == '.'; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool ends_with_nocase(std::string_view s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  auto tail = s.substr(s.size() - suffix.size());
  return std::equal(tail.begin(), tail.end(), suffix.begin(),
                    [](char a, char b) { return to_lower(a) == b; });
}

bool all_base32(std::string_view s) { return std::all_of(s.begin(), s.end(), is_base32_char); }

// RFC-1035 style label: 1..63 chars of [a-z0-9-], no leading or trailing hyphen.
std::optional<InvalidReason> check_label(std::string_view label) {
  if (label.empty()) return InvalidReason::BadAlphabet;
  if (label.size() > kMaxLabelLength) return InvalidReason::BadLength;
  if (label.front() == '-' || label.back() == '-') return InvalidReason::BadAlphabet;
  for (char c : label) {
    if (!(is_digit(c) || (c >= 'a' && c <= 'z') || c == '-')) return InvalidReason::BadAlphabet;
  }
  return std::nullopt;
}

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto dot = host.find('.', start);
    if (dot == std::string_view::npos) {
      out.push_back(host.substr(start));
      return out;
    }
    out.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
}

// Reduces a URL-ish string to a lowercase bare hostname.
std::string to_host(std::string_view name) {
  while (!name.empty() && is_space(name.front())) name.remove_prefix(1);
  while (!name.empty() && is_space(name.back())) name.remove_suffix(1);

  std::string s(name.size(), '\0');
  std::transform(name.begin(), name.end(), s.begin(), to_lower);
  std::string_view v = s;

  if (auto sep = v.find("://"); sep != std::string_view::npos && sep > 0 && is_alpha(v.front()) &&
                                std::all_of(v.begin(), v.begin() + static_cast<long>(sep),
                                            is_scheme_char)) {
    v.remove_prefix(sep + 3);
  } else if (v.starts_with("//")) {
    v.remove_prefix(2);
  }
  if (auto cut = v.find_first_of("/?#"); cut != std::string_view::npos) v = v.substr(0, cut);
  if (auto at = v.rfind('@'); at != std::string_view::npos) v.remove_prefix(at + 1);
  if (auto colon = v.rfind(':'); colon != std::string_view::npos) {
    auto port = v.substr(colon + 1);
    if (std::all_of(port.begin(), port.end(), is_digit)) v = v.substr(0, colon);
  }
  while (!v.empty() && v.back() == '.') v.remove_suffix(1);
  return std::string(v);
}

Classification invalid(InvalidReason r) { return Classification{std::nullopt, r}; }

Classification valid(std::string_view raw, std::string canonical, AddressKind kind) {
  return Classification{Domain{std::string(raw), std::move(canonical), network_of(kind), kind},
                        std::nullopt};
}

}  // namespace

bool is_base32_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '2' && c <= '7'); }

Network network_of(AddressKind kind) {
  return (kind == AddressKind::OnionV2 || kind == AddressKind::OnionV3) ? Network::Tor
                                                                         : Network::I2p;
}

std::size_t onion_body_length(AddressKind kind) {
  return kind == AddressKind::OnionV3 ? 56 : 16;
}

Classification classify_domain(std::string_view name) {
  const std::string host = to_host(name);
  if (host.empty()) return invalid(InvalidReason::Empty);
  if (host.size() > kMaxHostLength) {
    return ends_with(host, kOnionSuffix) || ends_with(host, kI2pSuffix)
               ? invalid(InvalidReason::BadLength)
               : invalid(InvalidReason::BadTld);
  }
  std::string_view h = host;

  if (ends_with(h, kOnionSuffix)) {
    auto body = h.substr(0, h.size() - kOnionSuffix.size());
    if (body.empty()) return invalid(InvalidReason::BadLength);
    auto labels = split_labels(body);
    // Subdomains of an onion service resolve to the service itself.
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
      if (auto bad = check_label(labels[i])) return invalid(*bad);
    }
    auto service = labels.back();
    if (service.empty()) return invalid(InvalidReason::BadAlphabet);
    AddressKind kind;
    if (service.size() == 16) {
      kind = AddressKind::OnionV2;
    } else if (service.size() == 56) {
      kind = AddressKind::OnionV3;
    } else {
      return invalid(InvalidReason::BadLength);
    }
    if (!all_base32(service)) return invalid(InvalidReason::BadAlphabet);
    return valid(name, std::string(service) + std::string(kOnionSuffix), kind);
  }

  if (ends_with(h, kB32Suffix)) {
    auto body = h.substr(0, h.size() - kB32Suffix.size());
    if (body.size() != kB32BodyLength) return invalid(InvalidReason::BadLength);
    if (!all_base32(body)) return invalid(InvalidReason::BadAlphabet);
    return valid(name, host, AddressKind::I2pB32);
  }

  if (ends_with(h, kI2pSuffix)) {
    auto body = h.substr(0, h.size() - kI2pSuffix.size());
    if (body.empty()) return invalid(InvalidReason::BadLength);
    for (auto label : split_labels(body)) {
      if (auto bad = check_label(label)) return invalid(*bad);
    }
    return valid(name, host, AddressKind::I2pNamed);
  }

  return invalid(InvalidReason::BadTld);
}

std::vector<ExtractedDomain> extract_domains(std::string_view text) {
  std::vector<ExtractedDomain> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!is_host_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < n && is_host_char(text[i])) ++i;
    std::size_t end = i;
    while (begin < end && (text[begin] == '.' || text[begin] == '-')) ++begin;
    while (end > begin && (text[end - 1] == '.' || text[end - 1] == '-')) --end;
    auto run = text.substr(begin, end - begin);
    if (!ends_with_nocase(run, kOnionSuffix) && !ends_with_nocase(run, kI2pSuffix)) continue;

    auto cls = classify_domain(run);
    if (!cls) continue;

    std::size_t start = begin;
    if (begin >= 3 && text.substr(begin - 3, 3) == "://") {
      std::size_t s = begin - 3;
      while (s > 0 && is_scheme_char(text[s - 1])) --s;
      while (s < begin - 3 && !is_alpha(text[s])) ++s;
      if (s < begin - 3) start = s;
    }
    cls.domain->raw = std::string(text.substr(start, end - start));
    out.push_back(ExtractedDomain{std::move(*cls.domain), start});
  }
  return out;
}

std::string_view to_string(Network net) { return net == Network::Tor ? "tor" : "i2p"; }

std::string_view to_string(AddressKind kind) {
  switch (kind) {
    case AddressKind::OnionV2: return "onion-v2";
    case AddressKind::OnionV3: return "onion-v3";
    case AddressKind::I2pNamed: return "i2p-named";
    case AddressKind::I2pB32: return "i2p-b32";
  }
  return "?";
}

std::string_view to_string(InvalidReason reason) {
  switch (reason) {
    case InvalidReason::BadTld: return "bad-tld";
    case InvalidReason::BadLength: return "bad-length";
    case InvalidReason::BadAlphabet: return "bad-alphabet";
    case InvalidReason::Empty: return "empty";
  }
  return "?";
}

std::optional<Network> parse_network(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), to_lower);
  if (lower == "tor") return Network::Tor;
  if (lower == "i2p") return Network::I2p;
  return std::nullopt;
}

std::optional<AddressKind> parse_address_kind(std::string_view s) {
  static constexpr std::array kinds = {AddressKind::OnionV2, AddressKind::OnionV3,
                                       AddressKind::I2pNamed, AddressKind::I2pB32};
  for (auto k : kinds) {
    if (to_string(k) == s) return k;
  }
  if (s == "v2") return AddressKind::OnionV2;
  if (s == "v3") return AddressKind::OnionV3;
  return std::nullopt;
}

}  // namespace darklink
