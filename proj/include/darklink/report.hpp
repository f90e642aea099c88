// Rankings, cross-network census, replication checks, report emitters and
// DOT export.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "darklink/graph.hpp"
#include "darklink/metrics.hpp"

namespace darklink {

struct RankingEntry {
  std::size_t rank = 0;
  std::size_t overall_rank = 0;  // position without the network filter
  std::string domain;
  Network network = Network::Tor;
  double value = 0.0;

  friend bool operator==(const RankingEntry&, const RankingEntry&) = default;
};

struct Ranking {
  Metric metric = Metric::InDegree;
  std::optional<Network> network_filter;
  std::vector<RankingEntry> entries;

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

/// Top k nodes by value; ties go to the lexicographically smaller domain.
/// k larger than the candidate count returns the full ranking.
Ranking top_k(const ScoreVector& scores, const LinkGraph& g, std::size_t k,
              std::optional<Network> network_filter = std::nullopt);

struct CrossCensus {
  std::uint64_t i2p_to_tor_edges = 0;
  std::uint64_t tor_to_i2p_edges = 0;
  std::uint64_t tor_domains_linked_from_i2p = 0;
  std::uint64_t i2p_domains_linked_from_tor = 0;

  friend bool operator==(const CrossCensus&, const CrossCensus&) = default;
};

CrossCensus cross_census(const LinkGraph& g);

/// Share of a reference population of onion services present in the graph.
struct Coverage {
  std::uint64_t tor_domains = 0;
  std::uint64_t i2p_domains = 0;
  std::uint64_t reference_tor_services = 0;
  double tor_coverage = 0.0;

  friend bool operator==(const Coverage&, const Coverage&) = default;
};

/// 75k unique onion services, the Tor metrics portal figure for 2019.
inline constexpr std::uint64_t kReferenceTorServices = 75000;

Coverage estimate_coverage(const LinkGraph& g,
                           std::uint64_t reference_tor_services = kReferenceTorServices);

/// Table 1 columns.
struct NetworkSummaries {
  GraphMetrics i2p;
  GraphMetrics tor;
  GraphMetrics combined;

  friend bool operator==(const NetworkSummaries&, const NetworkSummaries&) = default;
};

NetworkSummaries summarize_networks(const LinkGraph& g, const SummaryOptions& opts = {});

enum class DeviationStatus : unsigned char {
  Match,                // equal at printed precision
  AlternateConvention,  // equal under the convention named in `note`
  SuspectedErratum,     // printed value looks like a typo of the computed one
  Mismatch,
};

std::string_view to_string(DeviationStatus s);
std::optional<DeviationStatus> parse_deviation_status(std::string_view s);

struct Deviation {
  std::string table;
  std::string row;
  std::string column;
  std::string published;
  std::string computed;
  DeviationStatus status = DeviationStatus::Mismatch;
  std::string note;

  friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct Report {
  std::optional<NetworkSummaries> summary;
  std::vector<Ranking> rankings;
  std::optional<CrossCensus> census;
  std::optional<Coverage> coverage;
  std::vector<Deviation> deviations;

  friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat : unsigned char { Json, Markdown, Csv };
std::optional<ReportFormat> parse_report_format(std::string_view s);

std::string emit_json(const Report& r);
/// Throws std::invalid_argument on malformed or foreign documents.
Report parse_report_json(std::string_view text);
std::string emit_markdown(const Report& r);

struct CsvFile {
  std::string name;
  std::string content;
};
/// One file per table.
std::vector<CsvFile> emit_csv(const Report& r);

/// Whole report as one document. CSV tables are concatenated, each
/// preceded by a "# <file name>" line.
std::string render_report(const Report& r, ReportFormat format);

/// Writes `out` as a file (Json, Markdown) or a directory of tables (Csv).
void write_report(const Report& r, ReportFormat format, const std::filesystem::path& out);

/// True when a printed (possibly ellipsized, e.g. "dhosting4xx...syd.onion")
/// name designates `domain`.
bool printed_name_matches(std::string_view printed, std::string_view domain);

struct ReplicationOptions {
  SummaryOptions summary;
  /// Rows checked per ranking table.
  std::size_t ranking_depth = 10;
  /// Closeness convention reported in the ranking; the others are tried
  /// as alternates.
  Direction closeness_direction = Direction::Out;
  /// nullopt: exact betweenness.
  std::optional<SampledBetweenness> betweenness_sampling;
  PageRankOptions pagerank;
};

/// Computes the metric tables of the published study on `g` and compares
/// every published value, naming alternate conventions and suspected typos.
Report replicate(const LinkGraph& g, const ReplicationOptions& opts = {});

enum class DotComponent : unsigned char { Largest, All };

struct DotOptions {
  DotComponent component = DotComponent::Largest;
  double max_width = 2.0;  // inches, for the highest-degree node
};

/// DOT digraph: node width proportional to in+out degree, fill color by
/// network. Largest keeps only the largest weakly connected component.
std::string export_dot(const LinkGraph& g, const DotOptions& opts = {});

}  // namespace darklink
