#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "avrgen/cot.hpp"
#include "avrgen/emitter.hpp"
#include "avrgen/encoding.hpp"
#include "avrgen/eval.hpp"
#include "avrgen/parallel.hpp"
#include "avrgen/qa.hpp"
#include "avrgen/render.hpp"
#include "avrgen/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<avrgen::PatternId> parse_patterns(const std::string& arg) {
  std::vector<avrgen::PatternId> out;
  if (arg == "all") {
    for (int i = 0; i < avrgen::kPatternCount; ++i) out.push_back(static_cast<avrgen::PatternId>(i));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    std::size_t comma = arg.find(',', pos);
    std::string name = arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto id = avrgen::pattern_from_name(name);
    if (!id) throw CLI::ValidationError("--patterns", "unknown pattern '" + name + "'");
    out.push_back(*id);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<json> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

void write_manifest(const fs::path& path, json manifest, const json& resolved_config) {
  manifest["config_hash"] = avrgen::digest_hex(avrgen::fnv1a64(resolved_config.dump()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << "\n";
}

fs::path resolve_output(const std::string& path) {
  const char* root = std::getenv("AVRGEN_OUTPUT_ROOT");
  fs::path p(path);
  if (root && *root && p.is_relative()) return fs::path(root) / p;
  return p;
}

int cmd_generate(const std::string& patterns_arg, long long per_pattern,
                 const std::string& split_arg, std::uint64_t seed, const std::string& out,
                 int workers) {
  const auto patterns = parse_patterns(patterns_arg);
  const auto split = split_arg == "test" ? avrgen::Split::Test : avrgen::Split::Train;
  const std::size_t total = patterns.size() * static_cast<std::size_t>(per_pattern);
  std::vector<std::string> lines(total);
  avrgen::parallel_for(total, workers, [&](std::size_t i) {
    const std::size_t n = static_cast<std::size_t>(per_pattern);
    const auto pattern = patterns[i / n];
    const std::uint64_t puzzle_seed = avrgen::derive_seed(
        seed, avrgen::split_name(split), static_cast<int>(pattern), i % n);
    const auto record = avrgen::generate_puzzle(pattern, puzzle_seed, split);
    lines[i] = avrgen::puzzle_to_json(record).dump();
  });

  const fs::path out_path = resolve_output(out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out_path.string());
  for (const auto& line : lines) f << line << "\n";

  write_manifest(out_path.string() + ".manifest.json",
                 {{"command", "generate"}, {"count", total}, {"seed", seed},
                  {"split", avrgen::split_name(split)}},
                 {{"patterns", patterns_arg}, {"per_pattern", per_pattern},
                  {"split", split_arg}, {"seed", seed}});
  std::cout << "generated " << total << " puzzles -> " << out_path.string() << "\n";
  return 0;
}

int cmd_render(const std::string& records_path, const std::string& out_dir,
               const std::string& composition, int panel_px, int workers) {
  avrgen::RenderConfig cfg;
  cfg.panel_px = panel_px;
  if (composition == "context_only") cfg.composition = avrgen::Composition::ContextOnly;
  else if (composition == "single_candidate") cfg.composition = avrgen::Composition::SingleCandidate;
  else cfg.composition = avrgen::Composition::FullQuiz;

  const auto lines = read_jsonl(records_path);
  const fs::path dir = resolve_output(out_dir);
  fs::create_directories(dir);
  avrgen::parallel_for(lines.size(), workers, [&](std::size_t i) {
    const auto record = avrgen::puzzle_from_json(lines[i]);
    auto quiz = avrgen::render_quiz(record, cfg);
    avrgen::png::write_file(dir / (record.puzzle_id + ".png"), quiz.image);
    std::ofstream g(dir / (record.puzzle_id + ".geom.json"), std::ios::binary | std::ios::trunc);
    g << quiz.manifest.dump(2) << "\n";
  });
  write_manifest(dir / "manifest.json",
                 {{"command", "render"}, {"count", lines.size()}},
                 {{"records", records_path}, {"composition", composition},
                  {"panel_px", panel_px}});
  std::cout << "rendered " << lines.size() << " quizzes -> " << dir.string() << "\n";
  return 0;
}

int cmd_qa(const std::string& records_path, const std::string& mode_arg, std::uint64_t seed,
           const std::string& out) {
  auto mode = avrgen::elicitation_mode_from_name(mode_arg);
  if (!mode) throw CLI::ValidationError("--mode", "unknown elicitation mode");
  const auto lines = read_jsonl(records_path);
  const fs::path out_path = resolve_output(out);
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out_path.string());
  std::size_t count = 0;
  for (const auto& line : lines) {
    const auto record = avrgen::puzzle_from_json(line);
    avrgen::Rng rng = avrgen::Rng(seed).fork(record.puzzle_id);
    for (const auto& item : avrgen::synth_perception_qa(record, *mode, rng)) {
      f << json{{"id", item.id},
                {"puzzle_id", record.puzzle_id},
                {"question", item.question},
                {"answer", item.answer},
                {"kind", item.kind == avrgen::QAKind::GlobalContext ? "global_context"
                                                                    : "fine_grained"},
                {"order_index", item.order_index},
                {"elicitation_mode", avrgen::elicitation_mode_name(item.mode)}}
               .dump()
        << "\n";
      ++count;
    }
  }
  write_manifest(out_path.string() + ".manifest.json",
                 {{"command", "qa"}, {"items", count}, {"template_version",
                  avrgen::kQATemplateVersion}},
                 {{"records", records_path}, {"mode", mode_arg}, {"seed", seed}});
  std::cout << "synthesized " << count << " QA items -> " << out_path.string() << "\n";
  return 0;
}

int cmd_cot(const std::string& records_path, const std::string& out) {
  const auto lines = read_jsonl(records_path);
  const fs::path out_path = resolve_output(out);
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out_path.string());
  for (const auto& line : lines) {
    const auto record = avrgen::puzzle_from_json(line);
    const auto cot = avrgen::synth_cot(record);
    f << json{{"puzzle_id", record.puzzle_id},
              {"prefix", cot.prefix},
              {"steps", cot.steps},
              {"conclusion", cot.conclusion},
              {"final_answer", cot.final_answer},
              {"text", cot.full_text()}}
             .dump()
      << "\n";
  }
  write_manifest(out_path.string() + ".manifest.json",
                 {{"command", "cot"}, {"count", lines.size()},
                  {"template_version", avrgen::kCoTTemplateVersion}},
                 {{"records", records_path}});
  std::cout << "synthesized " << lines.size() << " CoT records -> " << out_path.string()
            << "\n";
  return 0;
}

int cmd_emit(const std::string& config_path, const std::string& stage_arg,
             const std::string& out_dir, int workers, const std::string& qa_mode_arg,
             bool no_images, const std::vector<std::string>& externals,
             const std::string& test_digest) {
  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot read config " + config_path);
  json config;
  f >> config;
  auto stages = avrgen::load_mixture_config(config);
  auto it = stages.find(stage_arg);
  if (it == stages.end()) {
    throw std::runtime_error("config declares no stage '" + stage_arg + "'");
  }
  avrgen::EmitOptions options;
  options.workers = workers;
  options.write_images = !no_images;
  auto mode = avrgen::elicitation_mode_from_name(qa_mode_arg);
  if (!mode) throw CLI::ValidationError("--qa-mode", "unknown elicitation mode");
  options.qa_mode = *mode;
  options.test_digest_path = test_digest;
  for (const auto& e : externals) {
    auto eq = e.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--external", "expected NAME=PATH");
    }
    options.external_sources[e.substr(0, eq)] = e.substr(eq + 1);
  }
  const auto manifest = avrgen::emit(it->second, resolve_output(out_dir), options);
  std::cout << "emitted " << manifest.at("record_count") << " records -> "
            << resolve_output(out_dir).string() << "\n";
  return 0;
}

int cmd_solve(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string first_line;
  std::getline(f, first_line);
  std::vector<json> items;
  try {
    items.push_back(json::parse(first_line));
    std::string line;
    while (std::getline(f, line)) {
      if (!line.empty()) items.push_back(json::parse(line));
    }
  } catch (const json::parse_error&) {
    // Multi-line single object.
    f.clear();
    f.seekg(0);
    json j;
    f >> j;
    items = {j};
  }
  for (const auto& j : items) {
    const auto record = avrgen::puzzle_from_json(j);
    const auto candidates = record.candidates();
    const auto solved = avrgen::solve(record.context_view(), candidates,
                                      avrgen::seed_pattern(record.pattern));
    std::cout << record.puzzle_id << ":";
    for (int idx : solved) std::cout << " " << idx;
    std::cout << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& key_path, const std::string& transcripts_path,
             const std::string& report_path, int candidates, bool warn_missing) {
  avrgen::AnswerKey key;
  key.candidate_count = candidates;
  for (const auto& j : read_jsonl(key_path)) {
    key.add(j.at("puzzle_id"), j.at("answer"), j.at("subtask"));
  }
  std::vector<avrgen::Transcript> transcripts;
  for (const auto& j : read_jsonl(transcripts_path)) {
    avrgen::Transcript t;
    t.puzzle_id = j.at("puzzle_id");
    t.raw_output = j.contains("output") ? j.at("output").get<std::string>()
                                        : j.at("raw_output").get<std::string>();
    transcripts.push_back(std::move(t));
  }
  if (transcripts.empty()) throw std::runtime_error("no transcripts to score");
  const auto report = avrgen::score(transcripts, key, !warn_missing);
  std::cout << avrgen::report_table(report);
  if (!report_path.empty()) {
    json out = avrgen::report_to_json(report);
    out["config_hash"] = avrgen::digest_hex(avrgen::fnv1a64(
        json{{"key", key_path}, {"transcripts", transcripts_path}}.dump()));
    std::ofstream rf(resolve_output(report_path), std::ios::binary | std::ios::trunc);
    rf << out.dump(2) << "\n";
  }
  return 0;
}

int cmd_stats(const std::string& records_path, int workers) {
  const auto lines = read_jsonl(records_path);
  std::vector<avrgen::PuzzleRecord> records(lines.size());
  std::vector<int> unique_flags(lines.size(), 0);
  avrgen::parallel_for(lines.size(), workers, [&](std::size_t i) {
    records[i] = avrgen::puzzle_from_json(lines[i]);
    const auto solved = avrgen::solve(records[i].context_view(), records[i].candidates(),
                                      avrgen::seed_pattern(records[i].pattern));
    unique_flags[i] =
        solved.size() == 1 && solved[0] == records[i].answer_position ? 1 : 0;
  });
  std::map<std::string, int> per_pattern;
  std::map<std::string, int> per_rule_kind;
  std::set<std::string> ids;
  int unique = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    per_pattern[avrgen::pattern_name(records[i].pattern)]++;
    for (const auto& cr : records[i].rules.per_component) {
      for (const auto& r : cr.rules) per_rule_kind[avrgen::rule_kind_name(r.kind)]++;
    }
    ids.insert(records[i].puzzle_id);
    unique += unique_flags[i];
  }
  json out = {{"count", records.size()},
              {"distinct_puzzle_ids", ids.size()},
              {"per_pattern", per_pattern},
              {"per_rule_kind", per_rule_kind},
              {"oracle_unique", unique}};
  std::cout << out.dump(2) << "\n";
  return records.size() == static_cast<std::size_t>(unique) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic RAVEN-style puzzle pipeline: generation, annotation, "
               "dataset emission and transcript scoring"};
  app.require_subcommand(1);
  app.set_config("--config-file");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate symbolic puzzle records");
  std::string gen_patterns = "all", gen_split = "train", gen_out = "records.jsonl";
  long long gen_per_pattern = 10;
  std::uint64_t gen_seed = 1;
  int gen_workers = 1;
  gen->add_option("--patterns", gen_patterns, "Comma-separated pattern ids or 'all'");
  gen->add_option("--per-pattern", gen_per_pattern, "Puzzles per pattern");
  gen->add_option("--split", gen_split, "train or test (seed namespace)")
      ->check(CLI::IsMember({"train", "test"}));
  gen->add_option("--seed", gen_seed, "Base namespace seed");
  gen->add_option("--out", gen_out, "Output JSONL path");
  gen->add_option("--workers", gen_workers, "Worker threads (never changes output bytes)");

  // render
  auto* ren = app.add_subcommand("render", "Rasterize puzzle records to PNG quizzes");
  std::string ren_records, ren_out = "renders", ren_comp = "full_quiz";
  int ren_panel = 160, ren_workers = 1;
  ren->add_option("--records", ren_records, "Puzzle records JSONL")->required();
  ren->add_option("--out", ren_out, "Output directory");
  ren->add_option("--composition", ren_comp, "full_quiz, context_only or single_candidate")
      ->check(CLI::IsMember({"full_quiz", "context_only", "single_candidate"}));
  ren->add_option("--panel-px", ren_panel, "Panel edge in pixels (min 64)");
  ren->add_option("--workers", ren_workers, "Worker threads");

  // qa
  auto* qa = app.add_subcommand("qa", "Synthesize perception question-answer items");
  std::string qa_records, qa_mode = "elicit_shuffle", qa_out = "qa.jsonl";
  std::uint64_t qa_seed = 1;
  qa->add_option("--records", qa_records, "Puzzle records JSONL")->required();
  qa->add_option("--mode", qa_mode, "base_shuffle, elicit_shuffle or elicit_sequential");
  qa->add_option("--seed", qa_seed, "Shuffle seed");
  qa->add_option("--out", qa_out, "Output JSONL path");

  // cot
  auto* cot = app.add_subcommand("cot", "Synthesize template chain-of-thought records");
  std::string cot_records, cot_out = "cot.jsonl";
  cot->add_option("--records", cot_records, "Puzzle records JSONL")->required();
  cot->add_option("--out", cot_out, "Output JSONL path");

  // emit
  auto* emit = app.add_subcommand("emit", "Materialize a staged training mixture");
  std::string emit_config, emit_stage = "stage1", emit_out = "dataset",
              emit_qa_mode = "elicit_shuffle", emit_test_digest;
  int emit_workers = 1;
  bool emit_no_images = false;
  std::vector<std::string> emit_external;
  emit->add_option("--config", emit_config, "Mixture config JSON")->required();
  emit->add_option("--stage", emit_stage, "stage1, stage2 or test");
  emit->add_option("--out", emit_out, "Output directory (AVRGEN_OUTPUT_ROOT applies)");
  emit->add_option("--workers", emit_workers, "Worker threads (never changes output bytes)");
  emit->add_option("--qa-mode", emit_qa_mode, "Elicitation mode for perception items");
  emit->add_flag("--no-images", emit_no_images, "Skip image rasterization");
  emit->add_option("--external", emit_external,
                   "NAME=PATH for ingest-only sources (repeatable)");
  emit->add_option("--test-digest", emit_test_digest,
                   "JSON array of held-out puzzle ids; emit fails on overlap");

  // solve
  auto* solve = app.add_subcommand("solve", "Run the rule-induction oracle on records");
  std::string solve_path;
  solve->add_option("record", solve_path, "Puzzle record JSON or JSONL")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Score model transcripts against an answer key");
  std::string eval_key, eval_transcripts, eval_report;
  int eval_candidates = 8;
  bool eval_warn_missing = false;
  eval->add_option("--key", eval_key, "Answer key JSONL")->required();
  eval->add_option("--transcripts", eval_transcripts, "Transcript JSONL")->required();
  eval->add_option("--report", eval_report, "Write machine-readable report JSON here");
  eval->add_option("--candidates", eval_candidates, "Candidate count (4 or 8)")
      ->check(CLI::IsMember({4, 8}));
  eval->add_flag("--warn-missing", eval_warn_missing,
                 "Tolerate key ids without transcripts");

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset summary plus uniqueness audit");
  std::string stats_records;
  int stats_workers = 1;
  stats->add_option("--records", stats_records, "Puzzle records JSONL")->required();
  stats->add_option("--workers", stats_workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_patterns, gen_per_pattern, gen_split, gen_seed, gen_out,
                          gen_workers);
    }
    if (ren->parsed()) return cmd_render(ren_records, ren_out, ren_comp, ren_panel, ren_workers);
    if (qa->parsed()) return cmd_qa(qa_records, qa_mode, qa_seed, qa_out);
    if (cot->parsed()) return cmd_cot(cot_records, cot_out);
    if (emit->parsed()) {
      return cmd_emit(emit_config, emit_stage, emit_out, emit_workers, emit_qa_mode,
                      emit_no_images, emit_external, emit_test_digest);
    }
    if (solve->parsed()) return cmd_solve(solve_path);
    if (eval->parsed()) {
      return cmd_eval(eval_key, eval_transcripts, eval_report, eval_candidates,
                      eval_warn_missing);
    }
    if (stats->parsed()) return cmd_stats(stats_records, stats_workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
