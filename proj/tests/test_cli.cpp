#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "darklink/cli.hpp"
#include "darklink/ingest.hpp"
#include "darklink/probegen.hpp"

using namespace darklink;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "darklink");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path dir() {
  static fs::path d = [] {
    auto p = fs::temp_directory_path() / "darklink_test_cli";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string put(const std::string& name, const std::string& content) {
  auto p = dir() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p.string();
}

const std::string A = "aaaaaaaaaaaaaaaa.onion";
const std::string B = "bbbbbbbbbbbbbbbb.onion";
const std::string C = "cccccccccccccccc.onion";

std::string cycle_csv() { return put("cycle.csv", "src,dst\n" + A + "," + B + "\n" + B + "," + C + "\n" + C + "," + A + "\n"); }

std::string synth_csv() {
  static std::string path = [] {
    auto p = (dir() / "synth.csv").string();
    auto r = run({"--seed", "3", "synth", "--n-i2p", "60", "--n-tor", "240", "--avg-degree", "3",
                  "-o", p});
    REQUIRE(r.code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("summary prints a Table 1 shaped report") {
  auto r = run({"summary", cycle_csv()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("| Nodes | 0 | 3 | 3 |") != std::string::npos);
  CHECK(r.out.find("| Diameter | 0 | 2 | 2 |") != std::string::npos);

  auto j = run({"--format", "json", "summary", cycle_csv()});
  CHECK(j.code == kExitOk);
  CHECK(j.out.find("\"schema\": \"darklink.report/1\"") != std::string::npos);
}

TEST_CASE("input errors exit with 1") {
  CHECK(run({}).code == kExitInputError);
  CHECK(run({"nosuch"}).code == kExitInputError);
  CHECK(run({"summary", cycle_csv(), "--bogus"}).code == kExitInputError);
  CHECK(run({"summary", (dir() / "missing.csv").string()}).code == kExitInputError);
  CHECK(run({"rank", cycle_csv(), "--metric", "fame"}).code == kExitInputError);
  CHECK(run({"rank", cycle_csv(), "--metric", "pagerank", "-k", "0"}).code == kExitInputError);
  CHECK(run({"--format", "xml", "summary", cycle_csv()}).code == kExitInputError);
  CHECK(run({"--direction", "sideways", "rank", cycle_csv(), "--metric", "closeness"}).code ==
        kExitInputError);
  CHECK(run({"synth", "--n-tor", "3", "--avg-degree", "5"}).code == kExitInputError);
  CHECK(run({"probe", "--keyword", "drug1", "--known", cycle_csv()}).code == kExitInputError);
  auto bad = put("bad.csv", "src,dst\n\"unterminated\n");
  CHECK(run({"summary", bad}).code == kExitInputError);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("real binary exit codes") {
  const std::string cli = DARKLINK_CLI_PATH;
  auto status = [&](const std::string& args) {
    int s = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("summary " + cycle_csv()) == 0);
  CHECK(status("summary") == 1);
  CHECK(status("--unknown-flag summary " + cycle_csv()) == 1);
}

TEST_CASE("ingest writes dataset and rejects") {
  auto raw = put("raw.tsv", "# crawl\n" + A + "\tx\t" + B + "\n" + A + "\tx\t" + A + "\n" + A +
                                "\tx\texample.com\n" + B + "\tx\tstats.i2p\n");
  auto out = (dir() / "ingested.csv").string();
  auto rej = (dir() / "rejects.csv").string();
  auto r = run({"ingest", raw, "--delimiter", "tab", "--dst-col", "2", "-o", out, "--rejects", rej});
  REQUIRE(r.code == 0);
  CHECK(slurp(out) == "src,dst\n" + A + "," + B + "\n" + B + ",stats.i2p\n");
  CHECK(slurp(rej).find("self-loop") != std::string::npos);
  CHECK(slurp(rej).find("non-darknet") != std::string::npos);
  CHECK(r.err.find("nodes=3 edges=2") != std::string::npos);
}

TEST_CASE("extract") {
  auto txt = put("page.txt", "visit http://zqktlwi4fecvo6ri.onion now, or stats.i2p or stats.i2p");
  auto r = run({"extract", txt});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("," + std::to_string(6) + ",tor,onion-v2,zqktlwi4fecvo6ri.onion") != std::string::npos);
  auto u = run({"extract", "--unique", txt});
  CHECK(std::count(u.out.begin(), u.out.end(), '\n') == 3);
}

TEST_CASE("rank, census, export-dot and probe") {
  auto r = run({"rank", synth_csv(), "--metric", "in-degree", "-k", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("| 5 |") != std::string::npos);
  auto f = run({"--format", "csv", "rank", synth_csv(), "--metric", "betweenness", "--network",
                "i2p", "--pivots", "20", "-k", "3"});
  CHECK(f.code == 0);
  CHECK(f.out.find("i2p") != std::string::npos);

  auto c = run({"census", synth_csv()});
  CHECK(c.code == 0);
  CHECK(c.out.find("i2p -> Tor") != std::string::npos);

  auto d = run({"export-dot", cycle_csv()});
  CHECK(d.code == 0);
  CHECK(d.out.rfind("digraph", 0) == 0);

  auto p = run({"probe", "--keyword", "drug", "market", "--count", "50", "--known", synth_csv()});
  CHECK(p.code == 0);
}

TEST_CASE("every subcommand is byte-identical across thread counts") {
  auto raw = put("raw2.csv", "src,dst\n" + A + "," + B + "\n" + B + ",stats.i2p\nstats.i2p," + A + "\n");
  auto txt = put("text.txt", "see " + A + " and stats.i2p");
  const std::vector<std::vector<std::string>> commands = {
      {"ingest", raw},
      {"extract", txt},
      {"summary", synth_csv()},
      {"rank", synth_csv(), "--metric", "betweenness", "-k", "20"},
      {"rank", synth_csv(), "--metric", "closeness", "-k", "20"},
      {"rank", synth_csv(), "--metric", "pagerank", "-k", "20"},
      {"census", synth_csv()},
      {"export-dot", synth_csv()},
      {"replicate", synth_csv(), "--pivots", "40"},
      {"synth", "--n-i2p", "30", "--n-tor", "90"},
      {"probe", "--keyword", "drug", "--count", "100", "--known", synth_csv()},
  };
  for (const auto& cmd : commands) {
    std::vector<std::string> outs;
    for (const char* threads : {"1", "4"}) {
      for (int rep = 0; rep < 2; ++rep) {
        auto path = (dir() / "det.out").string();
        std::vector<std::string> args = {"--threads", threads, "--seed", "9", "--format", "json"};
        args.insert(args.end(), cmd.begin(), cmd.end());
        args.push_back("-o");
        args.push_back(path);
        auto r = run(args);
        CAPTURE(cmd[0]);
        REQUIRE(r.code == 0);
        outs.push_back(slurp(path));
      }
    }
    CAPTURE(cmd[0]);
    CHECK_FALSE(outs[0].empty());
    for (const auto& o : outs) CHECK(o == outs[0]);
  }
}
