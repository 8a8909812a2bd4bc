#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(AVRGEN_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  RunResult r;
  r.output = out;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("avrgen-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::vector<json> out;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

}  // namespace

TEST_CASE("--help enumerates every subcommand") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub :
       {"generate", "render", "qa", "cot", "emit", "solve", "eval", "stats"}) {
    CHECK(r.output.find(sub) != std::string::npos);
  }
  // Each subcommand help lists its flags.
  const RunResult g = run_cli("generate --help");
  CHECK(g.exit_code == 0);
  for (const char* flag :
       {"--patterns", "--per-pattern", "--split", "--seed", "--out", "--workers"}) {
    CHECK(g.output.find(flag) != std::string::npos);
  }
}

TEST_CASE("generate, solve, qa, cot and stats run end to end") {
  const fs::path dir = fresh_dir("pipeline");
  const fs::path records = dir / "records.jsonl";

  const RunResult gen = run_cli("generate --patterns Center,G-2 --per-pattern 2 --seed 5 "
                                "--out " + records.string());
  REQUIRE(gen.exit_code == 0);
  const auto recs = read_jsonl(records);
  REQUIRE(recs.size() == 4);
  CHECK(fs::exists(records.string() + ".manifest.json"));

  // Worker count must not change generated bytes.
  const fs::path records8 = dir / "records8.jsonl";
  const RunResult gen8 = run_cli("generate --patterns Center,G-2 --per-pattern 2 --seed 5 "
                                 "--workers 8 --out " + records8.string());
  REQUIRE(gen8.exit_code == 0);
  std::ifstream a(records), b(records8);
  CHECK(std::string(std::istreambuf_iterator<char>(a), {}) ==
        std::string(std::istreambuf_iterator<char>(b), {}));

  const RunResult solve = run_cli("solve " + records.string());
  REQUIRE(solve.exit_code == 0);
  // Every line must report exactly the recorded answer position.
  std::istringstream lines(solve.output);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto& rec = recs[n];
    const std::string expected = rec.at("puzzle_id").get<std::string>() + ": " +
                                 std::to_string(rec.at("answer_position").get<int>());
    CHECK(line == expected);
    ++n;
  }
  CHECK(n == 4);

  const fs::path qa = dir / "qa.jsonl";
  REQUIRE(run_cli("qa --records " + records.string() + " --mode elicit_sequential --out " +
                  qa.string())
              .exit_code == 0);
  const auto qa_items = read_jsonl(qa);
  CHECK(qa_items.size() == 4 * 1 + 4 * 9 * 4);  // global + 36 fine per single-component
  CHECK(qa_items[0].at("kind") == "global_context");

  const fs::path cot = dir / "cot.jsonl";
  REQUIRE(run_cli("cot --records " + records.string() + " --out " + cot.string())
              .exit_code == 0);
  for (const auto& c : read_jsonl(cot)) {
    CHECK(c.at("text").get<std::string>().rfind("This is a regular puzzle.", 0) == 0);
  }

  const RunResult stats = run_cli("stats --records " + records.string());
  REQUIRE(stats.exit_code == 0);
  const json s = json::parse(stats.output);
  CHECK(s.at("count") == 4);
  CHECK(s.at("distinct_puzzle_ids") == 4);
  CHECK(s.at("oracle_unique") == 4);
  CHECK(s.at("per_pattern").at("Center") == 2);
  CHECK(s.at("per_pattern").at("G-2") == 2);
}

TEST_CASE("render writes PNGs with geometry sidecars") {
  const fs::path dir = fresh_dir("render");
  const fs::path records = dir / "r.jsonl";
  REQUIRE(run_cli("generate --patterns Center --per-pattern 1 --seed 2 --out " +
                  records.string())
              .exit_code == 0);
  const fs::path out = dir / "imgs";
  REQUIRE(run_cli("render --records " + records.string() + " --out " + out.string())
              .exit_code == 0);
  const auto recs = read_jsonl(records);
  const std::string id = recs[0].at("puzzle_id");
  CHECK(fs::exists(out / (id + ".png")));
  CHECK(fs::exists(out / (id + ".geom.json")));
  CHECK(fs::exists(out / "manifest.json"));
  std::ifstream g(out / (id + ".geom.json"));
  json geom;
  g >> geom;
  CHECK(geom.at("cells").size() == 9);
  CHECK(geom.at("candidates").size() == 8);
}

TEST_CASE("emit subcommand materializes a stage from a config file") {
  const fs::path dir = fresh_dir("emit");
  const fs::path config = dir / "mixtures.json";
  {
    std::ofstream f(config);
    f << json{{"stage1",
               {{"stage", "stage1"},
                {"sources", json::array({{{"name", "RAVEN-VQA"}, {"count", 7}}})},
                {"master_seed", 3},
                {"shuffle_seed", 4}}}}
             .dump();
  }
  const fs::path out = dir / "ds";
  const RunResult r = run_cli("emit --config " + config.string() + " --stage stage1 "
                              "--no-images --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "stage1.jsonl"));
  std::ifstream mf(out / "manifest.json");
  json manifest;
  mf >> manifest;
  CHECK(manifest.at("record_count") == 7);
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);

  const RunResult missing = run_cli("emit --config " + config.string() +
                                    " --stage stage9 --no-images --out " + out.string());
  CHECK(missing.exit_code != 0);
  CHECK(missing.output.find("error:") != std::string::npos);
}

TEST_CASE("eval subcommand scores transcripts and rejects empty input") {
  const fs::path dir = fresh_dir("eval");
  const fs::path key = dir / "key.jsonl";
  const fs::path ts = dir / "ts.jsonl";
  {
    std::ofstream f(key);
    f << json{{"puzzle_id", "a"}, {"answer", 3}, {"subtask", "Center"}}.dump() << "\n";
    f << json{{"puzzle_id", "b"}, {"answer", 5}, {"subtask", "G-2"}}.dump() << "\n";
  }
  {
    std::ofstream f(ts);
    f << json{{"puzzle_id", "a"}, {"output", "the answer is 3"}}.dump() << "\n";
    f << json{{"puzzle_id", "b"}, {"output", "the answer is 1"}}.dump() << "\n";
  }
  const fs::path report = dir / "report.json";
  const RunResult r = run_cli("eval --key " + key.string() + " --transcripts " +
                              ts.string() + " --report " + report.string());
  REQUIRE(r.exit_code == 0);
  std::ifstream rf(report);
  json rep;
  rf >> rep;
  CHECK(rep.at("overall_accuracy") == doctest::Approx(50.0));

  const fs::path empty = dir / "empty.jsonl";
  { std::ofstream f(empty); }
  const RunResult bad =
      run_cli("eval --key " + key.string() + " --transcripts " + empty.string());
  CHECK(bad.exit_code != 0);
  CHECK(bad.output.find("error:") != std::string::npos);

  // Strict mode refuses partial coverage unless --warn-missing is passed.
  const fs::path partial = dir / "partial.jsonl";
  {
    std::ofstream f(partial);
    f << json{{"puzzle_id", "a"}, {"output", "3"}}.dump() << "\n";
  }
  CHECK(run_cli("eval --key " + key.string() + " --transcripts " + partial.string())
            .exit_code != 0);
  CHECK(run_cli("eval --key " + key.string() + " --transcripts " + partial.string() +
                " --warn-missing")
            .exit_code == 0);
}

TEST_CASE("unknown flags and missing required options fail with nonzero exit") {
  CHECK(run_cli("generate --no-such-flag").exit_code != 0);
  CHECK(run_cli("render").exit_code != 0);       // --records is required
  CHECK(run_cli("solve /nonexistent/file.json").exit_code != 0);
}
