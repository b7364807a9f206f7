#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "remask/records.hpp"
#include "remask/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() : dir(fs::temp_directory_path() / ("remask_cli_" + std::to_string(getpid()))) {
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(REMASK_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string output(const std::string& args) {
  const std::string cmd = std::string(REMASK_CLI) + " " + args + " 2>/dev/null";
  std::string out;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    pclose(pipe);
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("command line workflow") {
  Workspace ws;
  const auto corpus = ws.path("c.jsonl");
  REQUIRE(run("synth --documents 150 --out " + corpus) == 0);
  CHECK(output("load --corpus " + corpus).find("documents 150") != std::string::npos);
  REQUIRE(run("stats --corpus " + corpus + " --out " + ws.path("t.json")) == 0);
  REQUIRE(run("train-clf --corpus " + corpus + " --out " + ws.path("m.json")) == 0);

  const auto base = "mask --corpus " + corpus + " --table " + ws.path("t.json") + " --model " + ws.path("m.json");
  REQUIRE(run(base + " --source dom0 --target dom1 --tau1 0.08 --out " + ws.path("a.jsonl") + " --workers 1") == 0);
  REQUIRE(run(base + " --source dom0 --target dom1 --tau1 0.08 --out " + ws.path("b.jsonl") + " --workers 4") == 0);
  CHECK(slurp(ws.path("a.jsonl")) == slurp(ws.path("b.jsonl")));
  auto records = remask::load_records(ws.path("a.jsonl"));
  CHECK(records.size() == 50);
  CHECK(records.front().source == "dom0");

  {
    std::ofstream cfg(ws.path("p.cfg"));
    cfg << "tau3 = 0.3\nunmask-strategy = greedy\nablation = no-unmask\n";
  }
  REQUIRE(run(base + " --cyclic --config " + ws.path("p.cfg") + " --ablation none --out " + ws.path("cyc.jsonl")) == 0);
  auto cyc = remask::load_records(ws.path("cyc.jsonl"));
  CHECK(cyc.size() == 150);
  std::size_t restored = 0;
  for (const auto& rec : cyc) {
    REQUIRE(rec.trace.has_value());
    if (!rec.trace->restored.empty()) {
      ++restored;
      CHECK(rec.trace->final_confidence < 0.3);
    }
  }
  CHECK(restored > 0);

  CHECK(output("mask-stats --by-pair --records " + ws.path("cyc.jsonl")).find("+Step3") != std::string::npos);
  CHECK(output("mask-stats --records " + ws.path("cyc.jsonl")).find("step2") != std::string::npos);
  REQUIRE(run("infill --corpus " + corpus + " --records " + ws.path("a.jsonl") + " --table " + ws.path("t.json") +
              " --seed 3 --out " + ws.path("i1.jsonl")) == 0);
  REQUIRE(run("infill --corpus " + corpus + " --records " + ws.path("a.jsonl") + " --table " + ws.path("t.json") +
              " --seed 3 --out " + ws.path("i2.jsonl")) == 0);
  CHECK(slurp(ws.path("i1.jsonl")) == slurp(ws.path("i2.jsonl")));
  CHECK(output("eval-leakage --corpus " + corpus + " --sizes 30,60 --seeds 2").find("Step1 masked") !=
        std::string::npos);
  CHECK(output("export-requests --corpus " + corpus).find("\"source_domain\"") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  Workspace ws;
  const auto corpus = ws.path("c.jsonl");
  REQUIRE(run("synth --documents 30 --out " + corpus) == 0);
  CHECK(run("load --corpus " + ws.path("missing.jsonl")) == 1);
  {
    std::ofstream bad(ws.path("bad.jsonl"));
    bad << "{\"id\":\"1\",\"domain\":\"a\"}\n";
  }
  CHECK(run("load --corpus " + ws.path("bad.jsonl")) == 1);
  CHECK(run("mask --corpus " + corpus + " --source dom0 --target dom1 --tau3 1.5") == 2);
  CHECK(run("mask --corpus " + corpus + " --source dom0 --target dom1 --unmask-strategy random") == 2);
  CHECK(run("mask --corpus " + corpus + " --source dom0 --target nowhere") == 1);
  CHECK(run("mask --corpus " + corpus + " --source dom0") == 2);
  CHECK(run("mask --corpus " + corpus + " --tau2 0.1 --tau2-quantile 0.5 --cyclic") == 2);
  CHECK(run("eval-leakage --corpus " + corpus + " --sizes 1000") == 1);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
}
