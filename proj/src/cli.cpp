#include "darklink/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "darklink/graph.hpp"
#include "darklink/ingest.hpp"
#include "darklink/metrics.hpp"
#include "darklink/parallel.hpp"
#include "darklink/probegen.hpp"
#include "darklink/report.hpp"
#include "json.hpp"

namespace darklink {
namespace {

// Bad user input: reported with exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string format;
  unsigned threads = 0;
  std::uint64_t seed = 42;
  std::string direction = "out";
  std::string component_mode = "weak";
  std::string pair_semantics = "directed";
};

template <class T>
T parsed(const std::optional<T>& v, const std::string& flag, const std::string& value) {
  if (!v) throw InputError("invalid value for " + flag + ": " + value);
  return *v;
}

ReportFormat report_format(const GlobalOptions& g, ReportFormat fallback) {
  if (g.format.empty()) return fallback;
  return parsed(parse_report_format(g.format), "--format", g.format);
}

SummaryOptions summary_options(const GlobalOptions& g) {
  SummaryOptions o;
  o.pair_semantics = parsed(parse_pair_semantics(g.pair_semantics), "--pair-semantics",
                            g.pair_semantics);
  o.component_mode = parsed(parse_component_mode(g.component_mode), "--component-mode",
                            g.component_mode);
  o.threads = g.threads;
  return o;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

void emit(const Report& r, ReportFormat format, const std::string& path, std::ostream& out) {
  if (format == ReportFormat::Csv && !path.empty() && path != "-") {
    write_report(r, format, path);
  } else {
    write_text(render_report(r, format), path, out);
  }
}

LinkGraph load_graph(const std::string& path) {
  std::vector<LineError> errors;
  auto d = read_dataset(path, &errors);
  if (!errors.empty()) {
    throw InputError(path + ":" + std::to_string(errors.front().line) + ": " +
                     errors.front().reason + " (" + std::to_string(errors.size()) +
                     " malformed lines)");
  }
  return build_graph(d);
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || s == "tab" || s == "\t") return '\t';
  if (s.size() == 1) return s[0];
  throw InputError("delimiter must be a single character or 'tab': " + s);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Darknet link graph toolkit: ingest, metrics, rankings, replication", "darklink"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format: markdown, json, csv");
  app.add_option("--threads", g.threads, "Worker threads (default: DARKLINK_THREADS or cores)");
  app.add_option("--seed", g.seed, "Seed for sampling and generators")->capture_default_str();
  app.add_option("--direction", g.direction, "Closeness distances: out, in, undirected")
      ->capture_default_str();
  app.add_option("--component-mode", g.component_mode, "Components: weak, strong")
      ->capture_default_str();
  app.add_option("--pair-semantics", g.pair_semantics, "Path statistics: directed, undirected")
      ->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Normalize edge lists into a canonical dataset");
  std::vector<std::string> ingest_files;
  std::string delimiter = ",", comment = "#", ingest_out, rejects_out;
  std::size_t src_col = 0;
  long long dst_col = 1;
  bool header = false;
  ingest->add_option("files", ingest_files, "Edge list files")->required();
  ingest->add_option("--delimiter", delimiter, "Field delimiter (',' or 'tab')");
  ingest->add_option("--src-col", src_col, "Source column (0-based)");
  ingest->add_option("--dst-col", dst_col, "Target column (0-based, -1: node list)");
  ingest->add_flag("--header", header, "Skip the first data line");
  ingest->add_option("--comment", comment, "Comment line prefix");
  ingest->add_option("-o,--output", ingest_out, "Canonical CSV output (default stdout)");
  ingest->add_option("--rejects", rejects_out, "Rejects log CSV");

  // extract
  auto* extract = app.add_subcommand("extract", "Extract darknet domains from text");
  std::vector<std::string> extract_files;
  bool unique = false;
  std::string extract_out;
  extract->add_option("files", extract_files, "Text files ('-' for stdin)")->required();
  extract->add_flag("--unique", unique, "Report each canonical domain once");
  extract->add_option("-o,--output", extract_out, "Output file");

  // summary / rank / census / export-dot / replicate
  std::string dataset, out_path;
  auto* summary = app.add_subcommand("summary", "Graph metrics for i2p, Tor and combined");
  summary->add_option("dataset", dataset, "Canonical dataset CSV")->required();
  summary->add_option("-o,--output", out_path, "Output path");

  auto* rank = app.add_subcommand("rank", "Top-k nodes by a metric");
  std::string metric_name, network_name;
  std::size_t k = 10, pivots = 0;
  double damping = 0.85;
  rank->add_option("dataset", dataset, "Canonical dataset CSV")->required();
  rank->add_option("--metric", metric_name,
                   "in-degree, out-degree, closeness, betweenness, pagerank")
      ->required();
  rank->add_option("-k", k, "Number of rows")->capture_default_str();
  rank->add_option("--network", network_name, "Restrict to tor or i2p");
  rank->add_option("--pivots", pivots, "Sampled betweenness pivots (0: exact)");
  rank->add_option("--damping", damping, "PageRank damping")->capture_default_str();
  rank->add_option("-o,--output", out_path, "Output path");

  auto* census = app.add_subcommand("census", "Cross-network link counts and coverage");
  std::uint64_t reference = kReferenceTorServices;
  census->add_option("dataset", dataset, "Canonical dataset CSV")->required();
  census->add_option("--reference-tor-services", reference, "Coverage denominator")
      ->capture_default_str();
  census->add_option("-o,--output", out_path, "Output path");

  auto* dot = app.add_subcommand("export-dot", "Graphviz export sized by degree");
  std::string component = "largest";
  dot->add_option("dataset", dataset, "Canonical dataset CSV")->required();
  dot->add_option("--component", component, "largest or all")->capture_default_str();
  dot->add_option("-o,--output", out_path, "Output path");

  auto* replicate_cmd = app.add_subcommand("replicate", "All tables plus deviation report");
  std::size_t depth = 10;
  replicate_cmd->add_option("dataset", dataset, "Canonical dataset CSV")->required();
  replicate_cmd->add_option("--pivots", pivots, "Sampled betweenness pivots (0: exact)");
  replicate_cmd->add_option("--depth", depth, "Ranking rows per table")->capture_default_str();
  replicate_cmd->add_option("-o,--output", out_path, "Output path");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic two-network dataset");
  SynthSpec spec;
  synth->add_option("--n-i2p", spec.n_i2p, "i2p nodes")->capture_default_str();
  synth->add_option("--n-tor", spec.n_tor, "Tor nodes")->capture_default_str();
  synth->add_option("--hub-fraction", spec.hub_fraction, "Share of nodes per network that emit half the edges")->capture_default_str();
  synth->add_option("--attachment-exponent", spec.attachment_exponent, "Attachment weight (degree+1)^exponent")->capture_default_str();
  synth->add_option("--cross-prob", spec.cross_edge_prob, "Probability an edge crosses networks")->capture_default_str();
  synth->add_option("--avg-degree", spec.target_avg_degree, "Edges per node (m = round(avg * n))")->capture_default_str();
  synth->add_option("-o,--output", out_path, "Output path");

  // probe
  auto* probe = app.add_subcommand("probe", "Keyword onion candidates checked against a dataset");
  std::vector<std::string> keywords;
  std::string kind = "v2", position = "prefix", known;
  std::size_t count = 1000;
  probe->add_option("--keyword", keywords, "Keyword(s) over [a-z2-7]")->required();
  probe->add_option("--kind", kind, "v2 or v3")->capture_default_str();
  probe->add_option("--position", position, "prefix, suffix, anywhere")->capture_default_str();
  probe->add_option("--count", count, "Candidates per keyword")->capture_default_str();
  probe->add_option("--known", known, "Canonical dataset of known domains")->required();
  probe->add_option("-o,--output", out_path, "Output path");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }

  try {
    if (*ingest) {
      EdgeFormat fmt;
      fmt.delimiter = parse_delimiter(delimiter);
      fmt.src_column = src_col;
      fmt.dst_column = dst_col < 0 ? std::nullopt : std::optional<std::size_t>(dst_col);
      fmt.has_header = header;
      fmt.comment_prefix = comment;
      std::vector<LoadResult> loaded(ingest_files.size());
      parallel_for(ingest_files.size(), resolve_threads(g.threads),
                   [&](std::size_t i) { loaded[i] = load_edge_list(ingest_files[i], fmt); });
      Dataset merged;
      std::vector<Reject> rejects;
      for (std::size_t i = 0; i < loaded.size(); ++i) {
        for (const auto& e : loaded[i].errors) {
          rejects.push_back({ingest_files[i], e.line, "malformed:" + e.reason, e.raw});
        }
        merged = merge(merged, normalize(loaded[i].records, &rejects));
      }
      write_text(format_dataset(merged), ingest_out, out);
      if (!rejects_out.empty()) write_text(format_rejects(rejects), rejects_out, out);
      const auto& s = merged.stats;
      err << "nodes=" << merged.nodes.size() << " edges=" << merged.edges.size()
          << " records=" << s.raw_records << " self_loops=" << s.dropped_self_loops
          << " duplicates=" << s.dropped_duplicates << " non_darknet=" << s.dropped_non_darknet
          << " invalid=" << s.dropped_invalid << " malformed_lines="
          << (rejects.size() - s.dropped_self_loops - s.dropped_duplicates -
              s.dropped_non_darknet - s.dropped_invalid - s.dropped_node_records)
          << "\n";
      return kExitOk;
    }

    if (*extract) {
      const auto fmt = report_format(g, ReportFormat::Csv);
      nlohmann::json rows = nlohmann::json::array();
      std::string csv = "source,offset,network,kind,domain\n";
      std::string md = "| Source | Offset | Network | Kind | Domain |\n|---|---|---|---|---|\n";
      std::set<std::string> seen;
      for (const auto& file : extract_files) {
        for (const auto& hit : extract_domains(read_text(file))) {
          if (unique && !seen.insert(hit.domain.canonical).second) continue;
          const auto net = std::string(to_string(hit.domain.network));
          const auto knd = std::string(to_string(hit.domain.kind));
          rows.push_back({{"source", file},
                          {"offset", hit.offset},
                          {"network", net},
                          {"kind", knd},
                          {"domain", hit.domain.canonical}});
          csv += file + "," + std::to_string(hit.offset) + "," + net + "," + knd + "," +
                 hit.domain.canonical + "\n";
          md += "| " + file + " | " + std::to_string(hit.offset) + " | " + net + " | " + knd +
                " | " + hit.domain.canonical + " |\n";
        }
      }
      write_text(fmt == ReportFormat::Json ? rows.dump(2) + "\n"
                 : fmt == ReportFormat::Csv ? csv
                                            : md,
                 extract_out, out);
      return kExitOk;
    }

    if (*summary) {
      Report r;
      r.summary = summarize_networks(load_graph(dataset), summary_options(g));
      emit(r, report_format(g, ReportFormat::Markdown), out_path, out);
      return kExitOk;
    }

    if (*rank) {
      const auto graph = load_graph(dataset);
      const auto metric = parsed(parse_metric(metric_name), "--metric", metric_name);
      std::optional<Network> filter;
      if (!network_name.empty()) filter = parsed(parse_network(network_name), "--network", network_name);
      if (k == 0) throw InputError("-k must be >= 1");
      ScoreVector scores;
      switch (metric) {
        case Metric::InDegree: scores = degrees(graph).first; break;
        case Metric::OutDegree: scores = degrees(graph).second; break;
        case Metric::HarmonicCloseness:
          scores = harmonic_closeness(
              graph, parsed(parse_direction(g.direction), "--direction", g.direction), g.threads);
          break;
        case Metric::Betweenness:
          scores = pivots > 0 ? betweenness(graph, SampledBetweenness{pivots, g.seed}, g.threads)
                              : betweenness(graph, ExactBetweenness{}, g.threads);
          break;
        case Metric::PageRank: {
          if (!(damping > 0.0 && damping < 1.0)) throw InputError("--damping must lie in (0, 1)");
          PageRankOptions po;
          po.damping = damping;
          scores = pagerank(graph, po, g.threads);
          break;
        }
      }
      Report r;
      r.rankings.push_back(top_k(scores, graph, k, filter));
      emit(r, report_format(g, ReportFormat::Markdown), out_path, out);
      return kExitOk;
    }

    if (*census) {
      const auto graph = load_graph(dataset);
      Report r;
      r.census = cross_census(graph);
      r.coverage = estimate_coverage(graph, reference);
      emit(r, report_format(g, ReportFormat::Markdown), out_path, out);
      return kExitOk;
    }

    if (*dot) {
      DotOptions o;
      if (component == "largest") {
        o.component = DotComponent::Largest;
      } else if (component == "all") {
        o.component = DotComponent::All;
      } else {
        throw InputError("--component must be largest or all");
      }
      write_text(export_dot(load_graph(dataset), o), out_path, out);
      return kExitOk;
    }

    if (*replicate_cmd) {
      ReplicationOptions o;
      o.summary = summary_options(g);
      o.ranking_depth = depth;
      o.closeness_direction = parsed(parse_direction(g.direction), "--direction", g.direction);
      if (pivots > 0) o.betweenness_sampling = SampledBetweenness{pivots, g.seed};
      emit(replicate(load_graph(dataset), o), report_format(g, ReportFormat::Markdown), out_path,
           out);
      return kExitOk;
    }

    if (*synth) {
      spec.seed = g.seed;
      try {
        write_text(format_dataset(synth_graph(spec)), out_path, out);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      return kExitOk;
    }

    if (*probe) {
      CandidateSpec cs;
      cs.kind = parsed(parse_address_kind(kind), "--kind", kind);
      cs.position = parsed(parse_keyword_position(position), "--position", position);
      cs.count = count;
      const auto known_set = read_dataset(known);
      const auto fmt = report_format(g, ReportFormat::Csv);
      nlohmann::json rows = nlohmann::json::array();
      std::string csv = "keyword,domain\n";
      std::string md = "| Keyword | Domain |\n|---|---|\n";
      for (std::size_t i = 0; i < keywords.size(); ++i) {
        cs.keyword = keywords[i];
        cs.seed = g.seed + i;
        CandidateSet cands;
        try {
          cands = generate_candidates(cs);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        }
        const auto hits = check_membership(cands.domains, known_set);
        err << cs.keyword << ": " << cands.domains.size() << " candidates"
            << (cands.exhausted ? " (keyword space exhausted)" : "") << ", " << hits.size()
            << " known\n";
        for (const auto& h : hits) {
          rows.push_back({{"keyword", cs.keyword}, {"domain", h.canonical}});
          csv += cs.keyword + "," + h.canonical + "\n";
          md += "| " + cs.keyword + " | " + h.canonical + " |\n";
        }
      }
      write_text(fmt == ReportFormat::Json ? rows.dump(2) + "\n"
                 : fmt == ReportFormat::Csv ? csv
                                            : md,
                 out_path, out);
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInternalError;
}

}  // namespace darklink
