#include "darklink/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace darklink {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates, out of range.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

// Splits one line into fields. Supports double-quoted fields with "" escapes.
std::optional<std::vector<std::string>> split_fields(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  std::size_t i = 0;
  while (true) {
    cur.clear();
    while (i < line.size() && (line[i] == ' ' || (line[i] == '\t' && delim != '\t'))) ++i;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          cur.push_back(line[i++]);
        }
      }
      if (!closed) return std::nullopt;
      while (i < line.size() && line[i] != delim) ++i;
    } else {
      auto next = line.find(delim, i);
      auto end = next == std::string_view::npos ? line.size() : next;
      cur = std::string(trim(line.substr(i, end - i)));
      i = end;
    }
    fields.push_back(cur);
    if (i >= line.size()) break;
    ++i;  // delimiter
    if (i == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return fields;
}

std::string record_text(const RawRecord& r) {
  return r.dst ? r.src + "," + *r.dst : r.src;
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

DatasetStats& DatasetStats::operator+=(const DatasetStats& o) {
  raw_records += o.raw_records;
  edge_records += o.edge_records;
  node_records += o.node_records;
  dropped_self_loops += o.dropped_self_loops;
  dropped_duplicates += o.dropped_duplicates;
  dropped_non_darknet += o.dropped_non_darknet;
  dropped_invalid += o.dropped_invalid;
  dropped_node_records += o.dropped_node_records;
  return *this;
}

std::optional<std::uint32_t> Dataset::find(std::string_view canonical) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), canonical,
                             [](const Domain& d, std::string_view c) { return d.canonical < c; });
  if (it == nodes.end() || it->canonical != canonical) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

LoadResult parse_edge_list(std::string_view content, const EdgeFormat& format,
                           std::string_view source_id) {
  LoadResult result;
  bool header_pending = format.has_header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    auto end = nl == std::string_view::npos ? content.size() : nl;
    auto line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!valid_utf8(line)) {
      result.errors.push_back({line_no, "invalid-utf8", std::string(line)});
      continue;
    }
    auto stripped = trim(line);
    if (stripped.empty()) continue;
    if (!format.comment_prefix.empty() && stripped.starts_with(format.comment_prefix)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }

    auto fields = split_fields(line, format.delimiter);
    if (!fields) {
      result.errors.push_back({line_no, "unterminated-quote", std::string(line)});
      continue;
    }
    std::size_t needed = std::max(format.src_column, format.dst_column.value_or(0)) + 1;
    if (fields->size() < needed) {
      result.errors.push_back({line_no, "missing-column", std::string(line)});
      continue;
    }
    RawRecord rec;
    rec.source_id = std::string(source_id);
    rec.line = line_no;
    rec.src = (*fields)[format.src_column];
    if (rec.src.empty()) {
      result.errors.push_back({line_no, "empty-src", std::string(line)});
      continue;
    }
    if (format.dst_column && !(*fields)[*format.dst_column].empty()) {
      rec.dst = (*fields)[*format.dst_column];
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

LoadResult load_edge_list(const std::filesystem::path& path, const EdgeFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return parse_edge_list(buf.str(), format, path.string());
}

Dataset normalize(const std::vector<RawRecord>& records, std::vector<Reject>* rejects) {
  Dataset out;
  auto& st = out.stats;
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<Domain> nodes;
  std::unordered_set<std::uint64_t> seen_edges;
  std::vector<Edge> edges;

  auto reject = [&](const RawRecord& r, std::string reason) {
    if (rejects) rejects->push_back({r.source_id, r.line, std::move(reason), record_text(r)});
  };
  auto intern = [&](Domain d) {
    auto [it, inserted] = ids.try_emplace(d.canonical, static_cast<std::uint32_t>(nodes.size()));
    if (inserted) nodes.push_back(std::move(d));
    return it->second;
  };

  for (const auto& r : records) {
    ++st.raw_records;
    auto src = classify_domain(r.src);
    if (!r.dst) {
      ++st.node_records;
      if (!src) {
        ++st.dropped_node_records;
        reject(r, "node:" + std::string(to_string(*src.reason)));
        continue;
      }
      intern(std::move(*src.domain));
      continue;
    }

    ++st.edge_records;
    auto dst = classify_domain(*r.dst);
    if (!src || !dst) {
      bool non_darknet = (!src && src.reason == InvalidReason::BadTld) ||
                         (!dst && dst.reason == InvalidReason::BadTld);
      auto why = !src ? *src.reason : *dst.reason;
      if (non_darknet) {
        ++st.dropped_non_darknet;
        reject(r, "non-darknet");
      } else {
        ++st.dropped_invalid;
        reject(r, "invalid:" + std::string(to_string(why)));
      }
      continue;
    }
    if (src.domain->canonical == dst.domain->canonical) {
      ++st.dropped_self_loops;
      reject(r, "self-loop");
      continue;
    }
    auto s = intern(std::move(*src.domain));
    auto d = intern(std::move(*dst.domain));
    auto key = (std::uint64_t{s} << 32) | d;
    if (!seen_edges.insert(key).second) {
      ++st.dropped_duplicates;
      reject(r, "duplicate");
      continue;
    }
    edges.push_back({s, d});
  }

  std::vector<std::uint32_t> order(nodes.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return nodes[a].canonical < nodes[b].canonical; });
  std::vector<std::uint32_t> remap(nodes.size());
  out.nodes.reserve(nodes.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = rank;
    out.nodes.push_back(std::move(nodes[order[rank]]));
  }
  for (auto& e : edges) e = {remap[e.src], remap[e.dst]};
  std::sort(edges.begin(), edges.end());
  out.edges = std::move(edges);
  return out;
}

Dataset merge(const Dataset& a, const Dataset& b) {
  Dataset out;
  out.stats = a.stats;
  out.stats += b.stats;
  std::vector<std::uint32_t> map_a(a.nodes.size()), map_b(b.nodes.size());
  std::size_t i = 0, j = 0;
  while (i < a.nodes.size() || j < b.nodes.size()) {
    auto idx = static_cast<std::uint32_t>(out.nodes.size());
    if (j == b.nodes.size() || (i < a.nodes.size() && a.nodes[i].canonical < b.nodes[j].canonical)) {
      map_a[i] = idx;
      out.nodes.push_back(a.nodes[i++]);
    } else if (i == a.nodes.size() || b.nodes[j].canonical < a.nodes[i].canonical) {
      map_b[j] = idx;
      out.nodes.push_back(b.nodes[j++]);
    } else {
      map_a[i] = idx;
      map_b[j++] = idx;
      out.nodes.push_back(a.nodes[i++]);
    }
  }
  out.edges.reserve(a.edges.size() + b.edges.size());
  for (auto e : a.edges) out.edges.push_back({map_a[e.src], map_a[e.dst]});
  for (auto e : b.edges) out.edges.push_back({map_b[e.src], map_b[e.dst]});
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::vector<RawRecord> to_records(const Dataset& d, std::string_view source_id) {
  std::vector<RawRecord> out;
  out.reserve(d.edges.size());
  std::vector<bool> touched(d.nodes.size(), false);
  std::size_t line = 1;
  for (auto e : d.edges) {
    touched[e.src] = touched[e.dst] = true;
    out.push_back({std::string(source_id), d.nodes[e.src].canonical, d.nodes[e.dst].canonical,
                   line++});
  }
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    if (!touched[v]) {
      out.push_back({std::string(source_id), d.nodes[v].canonical, std::nullopt, line++});
    }
  }
  return out;
}

std::string format_dataset(const Dataset& d) {
  std::string out = "src,dst\n";
  std::vector<bool> touched(d.nodes.size(), false);
  for (auto e : d.edges) {
    touched[e.src] = touched[e.dst] = true;
    out += d.nodes[e.src].canonical;
    out += ',';
    out += d.nodes[e.dst].canonical;
    out += '\n';
  }
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    if (!touched[v]) {
      out += d.nodes[v].canonical;
      out += ",\n";
    }
  }
  return out;
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  auto text = format_dataset(d);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path, std::vector<LineError>* errors) {
  auto loaded = load_edge_list(path, EdgeFormat::canonical_csv());
  if (errors) *errors = std::move(loaded.errors);
  return normalize(loaded.records);
}

std::string format_rejects(const std::vector<Reject>& rejects) {
  std::string out = "line,reason,raw\n";
  for (const auto& r : rejects) {
    out += std::to_string(r.line);
    out += ',';
    out += csv_quote(r.reason);
    out += ',';
    out += csv_quote(r.raw);
    out += '\n';
  }
  return out;
}

}  // namespace darklink
