#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "darklink/cli.hpp"
#include "darklink/domain.hpp"
#include "darklink/graph.hpp"
#include "darklink/ingest.hpp"
#include "darklink/metrics.hpp"
#include "darklink/probegen.hpp"
#include "darklink/report.hpp"

namespace py = pybind11;
using namespace darklink;

namespace {

template <typename E, typename P>
E parse_or_throw(const std::string& s, P parse, const char* what) {
  auto v = parse(s);
  if (!v) throw py::value_error(std::string("unknown ") + what + ": " + s);
  return *v;
}

py::dict domain_dict(const Domain& d) {
  py::dict r;
  r["canonical"] = d.canonical;
  r["network"] = std::string(to_string(d.network));
  r["kind"] = std::string(to_string(d.kind));
  return r;
}

py::dict metrics_dict(const GraphMetrics& m) {
  py::dict r;
  r["nodes"] = m.nodes;
  r["edges"] = m.edges;
  r["avg_degree"] = m.avg_degree;
  r["density"] = m.density;
  r["avg_path_length"] = m.avg_path_length;
  r["diameter"] = m.diameter;
  r["connected_components"] = m.connected_components;
  r["reachable_pairs"] = m.reachable_pairs;
  return r;
}

Dataset dataset_from_pairs(const std::vector<std::pair<std::string, std::string>>& edges,
                           const std::vector<std::string>& nodes) {
  std::vector<RawRecord> records;
  std::size_t line = 0;
  for (const auto& [s, d] : edges) records.push_back({"<python>", s, d, ++line});
  for (const auto& n : nodes) records.push_back({"<python>", n, std::nullopt, ++line});
  return normalize(records);
}

ScoreVector compute(const LinkGraph& g, const std::string& metric, const std::string& direction,
                    std::optional<std::size_t> pivots, std::uint64_t seed, unsigned threads) {
  switch (parse_or_throw<Metric>(metric, parse_metric, "metric")) {
    case Metric::InDegree: return degrees(g).first;
    case Metric::OutDegree: return degrees(g).second;
    case Metric::HarmonicCloseness:
      return harmonic_closeness(g, parse_or_throw<Direction>(direction, parse_direction, "direction"),
                                threads);
    case Metric::Betweenness:
      if (pivots) return betweenness(g, SampledBetweenness{*pivots, seed}, threads);
      return betweenness(g, ExactBetweenness{}, threads);
    case Metric::PageRank: return pagerank(g, {}, threads);
  }
  throw py::value_error("unknown metric");
}

}  // namespace

PYBIND11_MODULE(_darklink, m) {
  m.doc() = "Darknet hyperlink graph analysis";

  m.def("classify", [](const std::string& name) -> py::object {
    auto c = classify_domain(name);
    if (!c) return py::none();
    return domain_dict(*c.domain);
  }, py::arg("name"));

  m.def("extract", [](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& e : extract_domains(text)) out.push_back(e.domain.canonical);
    return out;
  }, py::arg("text"));

  py::class_<LinkGraph>(m, "Graph")
      .def_static("from_edges", [](const std::vector<std::pair<std::string, std::string>>& edges,
                                   const std::vector<std::string>& nodes) {
        return build_graph(dataset_from_pairs(edges, nodes));
      }, py::arg("edges"), py::arg("nodes") = std::vector<std::string>{})
      .def_static("load", [](const std::string& path) {
        return build_graph(normalize(load_edge_list(path, EdgeFormat::canonical_csv()).records));
      }, py::arg("path"))
      .def_static("synth", [](std::size_t n_i2p, std::size_t n_tor, double avg_degree,
                              double cross_edge_prob, std::uint64_t seed) {
        SynthSpec s;
        s.n_i2p = n_i2p;
        s.n_tor = n_tor;
        s.target_avg_degree = avg_degree;
        s.cross_edge_prob = cross_edge_prob;
        s.seed = seed;
        return build_graph(synth_graph(s));
      }, py::arg("n_i2p"), py::arg("n_tor"), py::arg("avg_degree") = 6.0,
         py::arg("cross_edge_prob") = 0.03, py::arg("seed") = 0)
      .def_property_readonly("node_count", &LinkGraph::node_count)
      .def_property_readonly("edge_count", &LinkGraph::edge_count)
      .def("nodes", [](const LinkGraph& g) {
        std::vector<std::string> out;
        for (const auto& d : g.domains()) out.push_back(d.canonical);
        return out;
      })
      .def("edges", [](const LinkGraph& g) {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
          for (auto w : g.out_neighbors(v)) {
            out.emplace_back(g.domain({v}).canonical, g.domain({w}).canonical);
          }
        }
        return out;
      })
      .def("subgraph", [](const LinkGraph& g, const std::string& net) {
        return subgraph_by_network(g, parse_or_throw<Network>(net, parse_network, "network"));
      }, py::arg("network"))
      .def("summary", [](const LinkGraph& g, const std::string& pairs, const std::string& comps,
                         unsigned threads) {
        SummaryOptions o;
        o.pair_semantics = parse_or_throw<PairSemantics>(pairs, parse_pair_semantics, "pair semantics");
        o.component_mode = parse_or_throw<ComponentMode>(comps, parse_component_mode, "component mode");
        o.threads = threads;
        const auto s = summarize_networks(g, o);
        py::dict r;
        r["i2p"] = metrics_dict(s.i2p);
        r["tor"] = metrics_dict(s.tor);
        r["combined"] = metrics_dict(s.combined);
        return r;
      }, py::arg("pair_semantics") = "directed", py::arg("component_mode") = "weak",
         py::arg("threads") = 0)
      .def("scores", [](const LinkGraph& g, const std::string& metric, const std::string& direction,
                        std::optional<std::size_t> pivots, std::uint64_t seed, unsigned threads) {
        return compute(g, metric, direction, pivots, seed, threads).values;
      }, py::arg("metric"), py::arg("direction") = "out", py::arg("pivots") = py::none(),
         py::arg("seed") = 0, py::arg("threads") = 0)
      .def("rank", [](const LinkGraph& g, const std::string& metric, std::size_t k,
                      std::optional<std::string> network, const std::string& direction,
                      std::optional<std::size_t> pivots, std::uint64_t seed, unsigned threads) {
        std::optional<Network> filter;
        if (network) filter = parse_or_throw<Network>(*network, parse_network, "network");
        const auto r = top_k(compute(g, metric, direction, pivots, seed, threads), g, k, filter);
        py::list out;
        for (const auto& e : r.entries) {
          out.append(py::make_tuple(e.rank, e.domain, std::string(to_string(e.network)), e.value));
        }
        return out;
      }, py::arg("metric"), py::arg("k") = 10, py::arg("network") = py::none(),
         py::arg("direction") = "out", py::arg("pivots") = py::none(), py::arg("seed") = 0,
         py::arg("threads") = 0)
      .def("census", [](const LinkGraph& g) {
        const auto c = cross_census(g);
        py::dict r;
        r["i2p_to_tor_edges"] = c.i2p_to_tor_edges;
        r["tor_to_i2p_edges"] = c.tor_to_i2p_edges;
        r["tor_domains_linked_from_i2p"] = c.tor_domains_linked_from_i2p;
        r["i2p_domains_linked_from_tor"] = c.i2p_domains_linked_from_tor;
        return r;
      })
      .def("replicate", [](const LinkGraph& g, const std::string& format, std::optional<std::size_t> pivots,
                           std::uint64_t seed, unsigned threads) {
        ReplicationOptions o;
        o.summary.threads = threads;
        if (pivots) o.betweenness_sampling = SampledBetweenness{*pivots, seed};
        const auto f = parse_or_throw<ReportFormat>(format, parse_report_format, "format");
        py::gil_scoped_release release;
        return render_report(replicate(g, o), f);
      }, py::arg("format") = "json", py::arg("pivots") = py::none(), py::arg("seed") = 0,
         py::arg("threads") = 0)
      .def("to_dot", [](const LinkGraph& g, bool all) {
        DotOptions o;
        o.component = all ? DotComponent::All : DotComponent::Largest;
        return export_dot(g, o);
      }, py::arg("all_components") = false);

  m.def("probe", [](const std::string& keyword, std::size_t count, const std::string& position,
                    bool v3, std::uint64_t seed) {
    CandidateSpec s;
    s.keyword = keyword;
    s.count = count;
    s.position = parse_or_throw<KeywordPosition>(position, parse_keyword_position, "position");
    s.kind = v3 ? AddressKind::OnionV3 : AddressKind::OnionV2;
    s.seed = seed;
    std::vector<std::string> out;
    for (const auto& d : generate_candidates(s).domains) out.push_back(d.canonical);
    return out;
  }, py::arg("keyword"), py::arg("count") = 10, py::arg("position") = "prefix", py::arg("v3") = false,
     py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::vector<std::string> full{"darklink"};
    full.insert(full.end(), args.begin(), args.end());
    const int code = run_cli(full, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
}
