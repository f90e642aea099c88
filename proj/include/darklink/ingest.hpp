// Loading, normalizing and merging darknet link datasets.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "darklink/domain.hpp"

namespace darklink {

/// Thrown for unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawRecord {
  std::string source_id;
  std::string src;
  std::optional<std::string> dst;  // absent for node-only records
  std::size_t line = 1;
};

/// Column layout of an edge list file. Columns are zero-based.
struct EdgeFormat {
  char delimiter = ',';
  std::size_t src_column = 0;
  std::optional<std::size_t> dst_column = 1;  // nullopt: node list
  bool has_header = false;
  std::string comment_prefix = "#";

  static EdgeFormat canonical_csv() { return EdgeFormat{',', 0, 1, true, "#"}; }
  static EdgeFormat tsv() { return EdgeFormat{'\t', 0, 1, false, "#"}; }
};

struct LineError {
  std::size_t line = 0;
  std::string reason;
  std::string raw;
};

struct LoadResult {
  std::vector<RawRecord> records;
  std::vector<LineError> errors;
};

/// One RawRecord per data line. Malformed lines (missing columns, empty
/// source, bytes that are not valid UTF-8) go to `errors` with their line
/// number. Throws IoError if the file cannot be read.
LoadResult load_edge_list(const std::filesystem::path& path, const EdgeFormat& format);

/// Same as load_edge_list, over in-memory content.
LoadResult parse_edge_list(std::string_view content, const EdgeFormat& format,
                           std::string_view source_id = "<memory>");

struct DatasetStats {
  std::uint64_t raw_records = 0;
  std::uint64_t edge_records = 0;
  std::uint64_t node_records = 0;
  std::uint64_t dropped_self_loops = 0;
  std::uint64_t dropped_duplicates = 0;
  std::uint64_t dropped_non_darknet = 0;
  std::uint64_t dropped_invalid = 0;
  std::uint64_t dropped_node_records = 0;

  DatasetStats& operator+=(const DatasetStats& o);
  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonical dataset. `nodes` is sorted by canonical name and unique;
/// `edges` index into `nodes`, sorted and unique, without self-loops.
struct Dataset {
  std::vector<Domain> nodes;
  std::vector<Edge> edges;
  DatasetStats stats;

  std::optional<std::uint32_t> find(std::string_view canonical) const;
  bool contains(std::string_view canonical) const { return find(canonical).has_value(); }

  /// Content equality: node set and edge set. Counters are not compared.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.nodes == b.nodes && a.edges == b.edges;
  }
};

struct Reject {
  std::string source_id;
  std::size_t line = 0;
  std::string reason;
  std::string raw;
};

/// Classifies every endpoint and drops self-loops, duplicates, and edges
/// with a non-darknet or invalid endpoint. Node set is the union of the
/// surviving edge endpoints and valid node-only records. Rejections are
/// appended to `rejects` when it is non-null.
Dataset normalize(const std::vector<RawRecord>& records, std::vector<Reject>* rejects = nullptr);

/// Set union of nodes and edges; counters summed.
Dataset merge(const Dataset& a, const Dataset& b);

/// Records that reproduce `d` through normalize.
std::vector<RawRecord> to_records(const Dataset& d, std::string_view source_id = "<dataset>");

/// Canonical CSV: header "src,dst", LF endings, edges sorted by
/// (src, dst) canonical name, then node-only rows "domain," for nodes
/// without edges.
std::string format_dataset(const Dataset& d);
void write_dataset(const Dataset& d, const std::filesystem::path& path);

/// Loads and normalizes a canonical CSV file.
Dataset read_dataset(const std::filesystem::path& path, std::vector<LineError>* errors = nullptr);

/// Rejects log as CSV "line,reason,raw".
std::string format_rejects(const std::vector<Reject>& rejects);

}  // namespace darklink
