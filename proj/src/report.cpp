#include "darklink/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "darklink/ingest.hpp"
#include "json.hpp"

namespace darklink {
namespace {

using nlohmann::json;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Shortest representation that round-trips.
std::string exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string display_network(Network n) { return n == Network::Tor ? "Tor" : "i2p"; }

std::string value_header(Metric m) {
  switch (m) {
    case Metric::InDegree: return "In-Degree";
    case Metric::OutDegree: return "Out-Degree";
    case Metric::HarmonicCloseness: return "Closeness";
    case Metric::Betweenness: return "Betweenness";
    case Metric::PageRank: return "PageRank";
  }
  return "Value";
}

std::string format_value(Metric m, double v) {
  switch (m) {
    case Metric::InDegree:
    case Metric::OutDegree:
    case Metric::Betweenness: return fixed(v, 0);
    case Metric::HarmonicCloseness: return fixed(v, 3);
    case Metric::PageRank: return fixed(v, 8);
  }
  return exact(v);
}

std::string format_density(double d) {
  return d < 0.001 ? "<0.001 (" + exact(d) + ")" : fixed(d, 3);
}

std::string ranking_title(const Ranking& r) {
  std::string t = "Highest " + std::string(to_string(r.metric));
  if (r.network_filter) t += " (" + display_network(*r.network_filter) + " only)";
  return t;
}

std::string ranking_file(const Ranking& r) {
  std::string name = "ranking_" + std::string(to_string(r.metric));
  if (r.network_filter) name += "_" + std::string(to_string(*r.network_filter));
  return name + ".csv";
}

// ---- JSON -----------------------------------------------------------------

json metrics_json(const GraphMetrics& m) {
  return json{{"nodes", m.nodes},
              {"edges", m.edges},
              {"avg_degree", m.avg_degree},
              {"density", m.density},
              {"avg_path_length", m.avg_path_length},
              {"diameter", m.diameter},
              {"connected_components", m.connected_components},
              {"reachable_pairs", m.reachable_pairs},
              {"pair_semantics", to_string(m.pair_semantics)},
              {"component_mode", to_string(m.component_mode)},
              {"flags", m.flags}};
}

template <class Opt>
auto require(const std::optional<Opt>& v, const char* what) {
  if (!v) throw std::invalid_argument(std::string("report json: bad ") + what);
  return *v;
}

GraphMetrics metrics_from_json(const json& j) {
  GraphMetrics m;
  m.nodes = j.at("nodes").get<std::size_t>();
  m.edges = j.at("edges").get<std::size_t>();
  m.avg_degree = j.at("avg_degree").get<double>();
  m.density = j.at("density").get<double>();
  m.avg_path_length = j.at("avg_path_length").get<double>();
  m.diameter = j.at("diameter").get<std::uint32_t>();
  m.connected_components = j.at("connected_components").get<std::size_t>();
  m.reachable_pairs = j.at("reachable_pairs").get<std::uint64_t>();
  m.pair_semantics =
      require(parse_pair_semantics(j.at("pair_semantics").get<std::string>()), "pair_semantics");
  m.component_mode =
      require(parse_component_mode(j.at("component_mode").get<std::string>()), "component_mode");
  m.flags = j.at("flags").get<unsigned>();
  return m;
}

constexpr std::string_view kSchema = "darklink.report/1";

}  // namespace

Ranking top_k(const ScoreVector& scores, const LinkGraph& g, std::size_t k,
              std::optional<Network> network_filter) {
  if (k == 0) throw std::invalid_argument("top_k: k must be >= 1");
  if (scores.values.size() != g.node_count()) {
    throw std::invalid_argument("top_k: score vector does not match graph");
  }
  const auto& v = scores.values;
  std::vector<std::uint32_t> order(v.size());
  std::iota(order.begin(), order.end(), 0u);
  // Ids follow canonical name order, so the id breaks ties lexicographically.
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  Ranking r;
  r.metric = scores.metric;
  r.network_filter = network_filter;
  for (std::size_t pos = 0; pos < order.size() && r.entries.size() < k; ++pos) {
    const auto id = order[pos];
    if (network_filter && g.labels()[id] != *network_filter) continue;
    r.entries.push_back(RankingEntry{r.entries.size() + 1, pos + 1, g.domains()[id].canonical,
                                     g.labels()[id], v[id]});
  }
  return r;
}

CrossCensus cross_census(const LinkGraph& g) {
  CrossCensus c;
  std::vector<bool> tor_target(g.node_count(), false), i2p_target(g.node_count(), false);
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    const auto lu = g.labels()[u];
    for (auto w : g.out_neighbors(u)) {
      if (g.labels()[w] == lu) continue;
      if (lu == Network::I2p) {
        ++c.i2p_to_tor_edges;
        tor_target[w] = true;
      } else {
        ++c.tor_to_i2p_edges;
        i2p_target[w] = true;
      }
    }
  }
  c.tor_domains_linked_from_i2p =
      static_cast<std::uint64_t>(std::count(tor_target.begin(), tor_target.end(), true));
  c.i2p_domains_linked_from_tor =
      static_cast<std::uint64_t>(std::count(i2p_target.begin(), i2p_target.end(), true));
  return c;
}

Coverage estimate_coverage(const LinkGraph& g, std::uint64_t reference_tor_services) {
  Coverage c;
  c.tor_domains = static_cast<std::uint64_t>(
      std::count(g.labels().begin(), g.labels().end(), Network::Tor));
  c.i2p_domains = g.node_count() - c.tor_domains;
  c.reference_tor_services = reference_tor_services;
  if (reference_tor_services > 0) {
    c.tor_coverage =
        static_cast<double>(c.tor_domains) / static_cast<double>(reference_tor_services);
  }
  return c;
}

NetworkSummaries summarize_networks(const LinkGraph& g, const SummaryOptions& opts) {
  NetworkSummaries s;
  s.i2p = graph_summary(subgraph_by_network(g, Network::I2p), opts);
  s.tor = graph_summary(subgraph_by_network(g, Network::Tor), opts);
  s.combined = graph_summary(g, opts);
  return s;
}

std::string_view to_string(DeviationStatus s) {
  switch (s) {
    case DeviationStatus::Match: return "match";
    case DeviationStatus::AlternateConvention: return "alternate-convention";
    case DeviationStatus::SuspectedErratum: return "suspected-erratum";
    case DeviationStatus::Mismatch: return "mismatch";
  }
  return "?";
}

std::optional<DeviationStatus> parse_deviation_status(std::string_view s) {
  for (auto st : {DeviationStatus::Match, DeviationStatus::AlternateConvention,
                  DeviationStatus::SuspectedErratum, DeviationStatus::Mismatch}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

std::string emit_json(const Report& r) {
  json j;
  j["schema"] = kSchema;
  if (r.summary) {
    j["summary"] = {{"i2p", metrics_json(r.summary->i2p)},
                    {"tor", metrics_json(r.summary->tor)},
                    {"combined", metrics_json(r.summary->combined)}};
  } else {
    j["summary"] = nullptr;
  }
  j["rankings"] = json::array();
  for (const auto& rk : r.rankings) {
    json entries = json::array();
    for (const auto& e : rk.entries) {
      entries.push_back({{"rank", e.rank},
                         {"overall_rank", e.overall_rank},
                         {"domain", e.domain},
                         {"network", to_string(e.network)},
                         {"value", e.value}});
    }
    j["rankings"].push_back(
        {{"metric", to_string(rk.metric)},
         {"network_filter",
          rk.network_filter ? json(to_string(*rk.network_filter)) : json(nullptr)},
         {"entries", std::move(entries)}});
  }
  if (r.census) {
    j["census"] = {{"i2p_to_tor_edges", r.census->i2p_to_tor_edges},
                   {"tor_to_i2p_edges", r.census->tor_to_i2p_edges},
                   {"tor_domains_linked_from_i2p", r.census->tor_domains_linked_from_i2p},
                   {"i2p_domains_linked_from_tor", r.census->i2p_domains_linked_from_tor}};
  } else {
    j["census"] = nullptr;
  }
  if (r.coverage) {
    j["coverage"] = {{"tor_domains", r.coverage->tor_domains},
                     {"i2p_domains", r.coverage->i2p_domains},
                     {"reference_tor_services", r.coverage->reference_tor_services},
                     {"tor_coverage", r.coverage->tor_coverage}};
  } else {
    j["coverage"] = nullptr;
  }
  j["deviations"] = json::array();
  for (const auto& d : r.deviations) {
    j["deviations"].push_back({{"table", d.table},
                               {"row", d.row},
                               {"column", d.column},
                               {"published", d.published},
                               {"computed", d.computed},
                               {"status", to_string(d.status)},
                               {"note", d.note}});
  }
  return j.dump(2) + "\n";
}

Report parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != kSchema) {
      throw std::invalid_argument("report json: unknown schema");
    }
    Report r;
    if (!j.at("summary").is_null()) {
      const auto& s = j["summary"];
      r.summary = NetworkSummaries{metrics_from_json(s.at("i2p")), metrics_from_json(s.at("tor")),
                                   metrics_from_json(s.at("combined"))};
    }
    for (const auto& rk : j.at("rankings")) {
      Ranking ranking;
      ranking.metric = require(parse_metric(rk.at("metric").get<std::string>()), "metric");
      if (!rk.at("network_filter").is_null()) {
        ranking.network_filter =
            require(parse_network(rk["network_filter"].get<std::string>()), "network");
      }
      for (const auto& e : rk.at("entries")) {
        ranking.entries.push_back(
            RankingEntry{e.at("rank").get<std::size_t>(), e.at("overall_rank").get<std::size_t>(),
                         e.at("domain").get<std::string>(),
                         require(parse_network(e.at("network").get<std::string>()), "network"),
                         e.at("value").get<double>()});
      }
      r.rankings.push_back(std::move(ranking));
    }
    if (!j.at("census").is_null()) {
      const auto& c = j["census"];
      r.census = CrossCensus{c.at("i2p_to_tor_edges").get<std::uint64_t>(),
                             c.at("tor_to_i2p_edges").get<std::uint64_t>(),
                             c.at("tor_domains_linked_from_i2p").get<std::uint64_t>(),
                             c.at("i2p_domains_linked_from_tor").get<std::uint64_t>()};
    }
    if (!j.at("coverage").is_null()) {
      const auto& c = j["coverage"];
      r.coverage = Coverage{c.at("tor_domains").get<std::uint64_t>(),
                            c.at("i2p_domains").get<std::uint64_t>(),
                            c.at("reference_tor_services").get<std::uint64_t>(),
                            c.at("tor_coverage").get<double>()};
    }
    for (const auto& d : j.at("deviations")) {
      r.deviations.push_back(
          Deviation{d.at("table").get<std::string>(), d.at("row").get<std::string>(),
                    d.at("column").get<std::string>(), d.at("published").get<std::string>(),
                    d.at("computed").get<std::string>(),
                    require(parse_deviation_status(d.at("status").get<std::string>()), "status"),
                    d.at("note").get<std::string>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
}

std::string emit_markdown(const Report& r) {
  std::string md;
  auto row = [&md](std::initializer_list<std::string> cells) {
    md += "|";
    for (const auto& c : cells) md += " " + c + " |";
    md += "\n";
  };
  auto rule = [&md](std::size_t cols) {
    md += "|";
    for (std::size_t i = 0; i < cols; ++i) md += "---|";
    md += "\n";
  };

  if (r.summary) {
    const auto& s = *r.summary;
    md += "## Graph metrics\n\n";
    row({"Metric", "i2p (eepsites)", "Tor (hidden services)",
         "i2p + Tor (eepsites + hidden services)"});
    rule(4);
    const GraphMetrics* cols[] = {&s.i2p, &s.tor, &s.combined};
    auto line = [&](const std::string& name, auto fmt) {
      row({name, fmt(*cols[0]), fmt(*cols[1]), fmt(*cols[2])});
    };
    line("Nodes", [](const GraphMetrics& m) { return std::to_string(m.nodes); });
    line("Edges", [](const GraphMetrics& m) { return std::to_string(m.edges); });
    line("Avg. Degree", [](const GraphMetrics& m) { return fixed(m.avg_degree, 3); });
    line("Density", [](const GraphMetrics& m) { return format_density(m.density); });
    line("Avg. Path Length", [](const GraphMetrics& m) { return fixed(m.avg_path_length, 3); });
    line("Diameter", [](const GraphMetrics& m) { return std::to_string(m.diameter); });
    line("Connected Components",
         [](const GraphMetrics& m) { return std::to_string(m.connected_components); });
    md += "\nPath statistics: " + std::string(to_string(s.combined.pair_semantics)) +
          " pairs; components: " + std::string(to_string(s.combined.component_mode)) + ".\n\n";
  }

  for (const auto& rk : r.rankings) {
    md += "## " + ranking_title(rk) + "\n\n";
    if (rk.network_filter) {
      row({"Rank", "Overall Rank", "Domain", "Network", value_header(rk.metric)});
      rule(5);
      for (const auto& e : rk.entries) {
        row({std::to_string(e.rank), std::to_string(e.overall_rank), e.domain,
             display_network(e.network), format_value(rk.metric, e.value)});
      }
    } else {
      row({"Rank", "Domain", "Network", value_header(rk.metric)});
      rule(4);
      for (const auto& e : rk.entries) {
        row({std::to_string(e.rank), e.domain, display_network(e.network),
             format_value(rk.metric, e.value)});
      }
    }
    md += "\n";
  }

  if (r.census) {
    const auto& c = *r.census;
    md += "## Cross-network links\n\n";
    row({"Direction", "Edges", "Distinct target domains"});
    rule(3);
    row({"i2p -> Tor", std::to_string(c.i2p_to_tor_edges),
         std::to_string(c.tor_domains_linked_from_i2p)});
    row({"Tor -> i2p", std::to_string(c.tor_to_i2p_edges),
         std::to_string(c.i2p_domains_linked_from_tor)});
    md += "\n";
  }

  if (r.coverage) {
    const auto& c = *r.coverage;
    md += "## Coverage\n\n";
    row({"Tor domains", "i2p domains", "Reference onion services", "Tor coverage"});
    rule(4);
    row({std::to_string(c.tor_domains), std::to_string(c.i2p_domains),
         std::to_string(c.reference_tor_services), fixed(100.0 * c.tor_coverage, 1) + "%"});
    md += "\n";
  }

  if (!r.deviations.empty()) {
    md += "## Deviations from published values\n\n";
    row({"Table", "Row", "Column", "Published", "Computed", "Status", "Note"});
    rule(7);
    for (const auto& d : r.deviations) {
      row({d.table, d.row, d.column, d.published, d.computed, std::string(to_string(d.status)),
           d.note});
    }
    md += "\n";
  }
  return md;
}

std::vector<CsvFile> emit_csv(const Report& r) {
  std::vector<CsvFile> files;
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };

  if (r.summary) {
    const auto& s = *r.summary;
    std::string t = "metric,i2p,tor,combined\n";
    auto line = [&](const char* name, auto get) {
      t += std::string(name) + "," + get(s.i2p) + "," + get(s.tor) + "," + get(s.combined) + "\n";
    };
    line("nodes", [](const GraphMetrics& m) { return std::to_string(m.nodes); });
    line("edges", [](const GraphMetrics& m) { return std::to_string(m.edges); });
    line("avg_degree", [](const GraphMetrics& m) { return exact(m.avg_degree); });
    line("density", [](const GraphMetrics& m) { return exact(m.density); });
    line("avg_path_length", [](const GraphMetrics& m) { return exact(m.avg_path_length); });
    line("diameter", [](const GraphMetrics& m) { return std::to_string(m.diameter); });
    line("connected_components",
         [](const GraphMetrics& m) { return std::to_string(m.connected_components); });
    files.push_back({"metrics.csv", std::move(t)});
  }
  for (const auto& rk : r.rankings) {
    std::string t = "rank,overall_rank,domain,network,value\n";
    for (const auto& e : rk.entries) {
      t += std::to_string(e.rank) + "," + std::to_string(e.overall_rank) + "," + e.domain + "," +
           std::string(to_string(e.network)) + "," + exact(e.value) + "\n";
    }
    files.push_back({ranking_file(rk), std::move(t)});
  }
  if (r.census) {
    const auto& c = *r.census;
    files.push_back({"census.csv",
                     "direction,edges,distinct_targets\ni2p_to_tor," +
                         std::to_string(c.i2p_to_tor_edges) + "," +
                         std::to_string(c.tor_domains_linked_from_i2p) + "\ntor_to_i2p," +
                         std::to_string(c.tor_to_i2p_edges) + "," +
                         std::to_string(c.i2p_domains_linked_from_tor) + "\n"});
  }
  if (r.coverage) {
    const auto& c = *r.coverage;
    files.push_back({"coverage.csv",
                     "tor_domains,i2p_domains,reference_tor_services,tor_coverage\n" +
                         std::to_string(c.tor_domains) + "," + std::to_string(c.i2p_domains) +
                         "," + std::to_string(c.reference_tor_services) + "," +
                         exact(c.tor_coverage) + "\n"});
  }
  if (!r.deviations.empty()) {
    std::string t = "table,row,column,published,computed,status,note\n";
    for (const auto& d : r.deviations) {
      t += quote(d.table) + "," + quote(d.row) + "," + quote(d.column) + "," + quote(d.published) +
           "," + quote(d.computed) + "," + std::string(to_string(d.status)) + "," + quote(d.note) +
           "\n";
    }
    files.push_back({"deviations.csv", std::move(t)});
  }
  return files;
}

std::string render_report(const Report& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return emit_json(r);
    case ReportFormat::Markdown: return emit_markdown(r);
    case ReportFormat::Csv: {
      std::string out;
      for (const auto& f : emit_csv(r)) {
        if (!out.empty()) out += "\n";
        out += "# " + f.name + "\n" + f.content;
      }
      return out;
    }
  }
  return {};
}

void write_report(const Report& r, ReportFormat format, const std::filesystem::path& out) {
  auto write_file = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + p.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed: " + p.string());
  };
  if (format != ReportFormat::Csv) {
    write_file(out, render_report(r, format));
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw IoError("cannot create directory " + out.string() + ": " + ec.message());
  for (const auto& f : emit_csv(r)) write_file(out / f.name, f.content);
}

bool printed_name_matches(std::string_view printed, std::string_view domain) {
  std::string lower(printed);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::string_view p = lower;
  for (std::string_view ellipsis : {std::string_view("..."), std::string_view("…")}) {
    if (auto at = p.find(ellipsis); at != std::string_view::npos) {
      auto head = p.substr(0, at);
      auto tail = p.substr(at + ellipsis.size());
      return domain.size() >= head.size() + tail.size() && domain.starts_with(head) &&
             domain.ends_with(tail);
    }
  }
  return p == domain;
}

// ---- DOT --------------------------------------------------------------------

std::string export_dot(const LinkGraph& g, const DotOptions& opts) {
  const std::size_t n = g.node_count();
  std::vector<bool> keep(n, true);
  if (opts.component == DotComponent::Largest && n > 0) {
    auto cc = connected_components(g, ComponentMode::Weak);
    std::vector<std::size_t> sizes(cc.count, 0);
    for (auto l : cc.labels) ++sizes[l];
    // Ties resolve to the component holding the smallest id.
    const auto largest = static_cast<std::uint32_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (std::size_t v = 0; v < n; ++v) keep[v] = cc.labels[v] == largest;
  }
  std::size_t max_degree = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (keep[v]) max_degree = std::max(max_degree, g.in_degree(v) + g.out_degree(v));
  }

  std::string dot = "digraph darknet {\n";
  dot += "  graph [overlap=false, outputorder=edgesfirst];\n";
  dot += "  node [shape=circle, style=filled, fixedsize=true, label=\"\"];\n";
  dot += "  edge [arrowsize=0.3, color=\"#00000040\"];\n";
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const auto degree = g.in_degree(v) + g.out_degree(v);
    const double width =
        max_degree == 0 ? opts.max_width
                        : opts.max_width * static_cast<double>(degree) /
                              static_cast<double>(max_degree);
    const bool tor = g.labels()[v] == Network::Tor;
    dot += "  \"" + g.domains()[v].canonical + "\" [class=\"" + (tor ? "tor" : "i2p") +
           "\", fillcolor=\"" + (tor ? "#7e57c2" : "#f4a300") +
           "\", width=" + fixed(std::max(width, 0.01), 4) +
           ", degree=" + std::to_string(degree) + "];\n";
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    for (auto w : g.out_neighbors(v)) {
      if (keep[w]) {
        dot += "  \"" + g.domains()[v].canonical + "\" -> \"" + g.domains()[w].canonical + "\";\n";
      }
    }
  }
  dot += "}\n";
  return dot;
}

}  // namespace darklink
