#include "avrgen/emitter.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "avrgen/cot.hpp"
#include "avrgen/encoding.hpp"
#include "avrgen/parallel.hpp"

namespace avrgen {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Stage1: return "stage1";
    case Stage::Stage2: return "stage2";
    case Stage::Test: return "test";
  }
  return "?";
}

std::optional<Stage> stage_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Stage::Test); ++i) {
    auto s = static_cast<Stage>(i);
    if (name == stage_name(s)) return s;
  }
  return std::nullopt;
}

MixtureSpec mixture_from_json(const nlohmann::json& j) {
  MixtureSpec mix;
  auto stage = stage_from_name(j.at("stage").get<std::string>());
  if (!stage) throw ValidationError("unknown stage name");
  mix.stage = *stage;
  for (const auto& sj : j.at("sources")) {
    mix.sources.push_back({sj.at("name").get<std::string>(), sj.at("count").get<long long>()});
  }
  mix.master_seed = j.at("master_seed");
  mix.shuffle_seed = j.at("shuffle_seed");
  return mix;
}

nlohmann::json mixture_to_json(const MixtureSpec& mix) {
  nlohmann::json sources = nlohmann::json::array();
  for (const auto& s : mix.sources) sources.push_back({{"name", s.name}, {"count", s.count}});
  return {{"stage", stage_name(mix.stage)},
          {"sources", sources},
          {"master_seed", mix.master_seed},
          {"shuffle_seed", mix.shuffle_seed}};
}

std::map<std::string, MixtureSpec> load_mixture_config(const nlohmann::json& j) {
  std::map<std::string, MixtureSpec> out;
  for (const auto& [name, spec] : j.items()) {
    out[name] = mixture_from_json(spec);
  }
  // Process-level supervision: stage-2 must keep stage-1's perception sources.
  auto s1 = out.find("stage1");
  auto s2 = out.find("stage2");
  if (s1 != out.end() && s2 != out.end()) {
    for (const auto& src : s1->second.sources) {
      if (src.name.find("VQA") == std::string::npos) continue;
      bool present = std::any_of(s2->second.sources.begin(), s2->second.sources.end(),
                                 [&](const SourceSpec& s) { return s.name == src.name; });
      if (!present) {
        throw ValidationError("stage2 is missing stage1 perception source " + src.name);
      }
    }
  }
  return out;
}

nlohmann::json conversation_to_json(const ConversationRecord& rec) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& t : rec.conversations) {
    turns.push_back({{"from", t.role}, {"value", t.text}});
  }
  return {{"id", rec.id},
          {"image", rec.image},
          {"conversations", turns},
          {"meta", rec.meta}};
}

ConversationRecord conversation_from_json(const nlohmann::json& j) {
  ConversationRecord rec;
  rec.id = j.at("id");
  rec.image = j.value("image", "");
  for (const auto& tj : j.at("conversations")) {
    rec.conversations.push_back({tj.at("from").get<std::string>(),
                                 tj.at("value").get<std::string>()});
  }
  rec.meta = j.value("meta", nlohmann::json::object());
  return rec;
}

namespace {

constexpr char kImageToken[] = "<image>";

std::string image_rel_path(const std::string& dataset, const std::string& puzzle_id) {
  return "images/" + dataset + "/" + puzzle_id + ".png";
}

ConversationRecord vqa_record(const PuzzleRecord& puzzle, const std::vector<QAItem>& items,
                              const std::string& dataset, Stage stage) {
  ConversationRecord rec;
  rec.id = dataset + "/" + puzzle.puzzle_id;
  rec.image = image_rel_path(dataset, puzzle.puzzle_id);
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string q = items[i].question;
    if (i == 0) q = std::string(kImageToken) + "\n" + q;
    rec.conversations.push_back({"human", q});
    rec.conversations.push_back({"gpt", items[i].answer});
  }
  rec.meta = {{"dataset_name", dataset},
              {"pattern_id", pattern_name(puzzle.pattern)},
              {"split", stage == Stage::Test ? "test" : "train"},
              {"puzzle_id", puzzle.puzzle_id}};
  return rec;
}

ConversationRecord cot_record(const PuzzleRecord& puzzle, const std::string& dataset,
                              Stage stage) {
  ConversationRecord rec;
  rec.id = dataset + "/" + puzzle.puzzle_id;
  rec.image = image_rel_path(dataset, puzzle.puzzle_id);
  const CoTRecord cot = synth_cot(puzzle);
  rec.conversations.push_back(
      {"human", std::string(kImageToken) +
                    "\nFigure out the pattern that completes the 3x3 matrix and choose "
                    "the correct candidate (1-8)."});
  rec.conversations.push_back({"gpt", cot.full_text()});
  rec.meta = {{"dataset_name", dataset},
              {"pattern_id", pattern_name(puzzle.pattern)},
              {"split", stage == Stage::Test ? "test" : "train"},
              {"puzzle_id", puzzle.puzzle_id}};
  return rec;
}

struct RavenPlan {
  bool vqa = false;
  bool cot = false;
  long long per_pattern = 0;  // identical across requested RAVEN sources
};

}  // namespace

std::vector<ConversationRecord> ingest_external(const nlohmann::json& items,
                                                const std::string& dataset_name,
                                                std::vector<std::string>* rejections) {
  std::vector<ConversationRecord> out;
  std::set<std::uint64_t> seen;
  int index = -1;
  for (const auto& item : items) {
    ++index;
    auto reject = [&](const std::string& why) {
      if (rejections) {
        rejections->push_back("item " + std::to_string(index) + ": " + why);
      }
    };
    if (!item.is_object()) {
      reject("not an object");
      continue;
    }
    bool bad = false;
    for (const char* field : {"image", "question", "answer"}) {
      if (!item.contains(field) || !item[field].is_string() ||
          item[field].get<std::string>().empty()) {
        reject(std::string("missing or empty field '") + field + "'");
        bad = true;
        break;
      }
    }
    if (bad) continue;

    const std::string image = item["image"];
    std::string answer = item["answer"];
    const std::uint64_t content = fnv1a64(image + "\x1F" + answer);
    if (!seen.insert(content).second) {
      reject("duplicate image+answer content");
      continue;
    }
    if (item.value("kind", "") == "cot" && !item.value("regular", false)) {
      if (answer.rfind(kNonRegularPrefix, 0) != 0) {
        answer = prefix_nonregular(item, answer);
      }
    }

    ConversationRecord rec;
    rec.id = dataset_name + "/" + digest_hex(content);
    rec.image = image;
    rec.conversations.push_back(
        {"human", std::string(kImageToken) + "\n" + item["question"].get<std::string>()});
    rec.conversations.push_back({"gpt", answer});
    rec.meta = {{"dataset_name", item.value("dataset_name", dataset_name)},
                {"task", item.value("task", "non-regular")},
                {"split", "train"},
                {"puzzle_id", digest_hex(content)}};
    out.push_back(std::move(rec));
  }
  return out;
}

nlohmann::json emit(const MixtureSpec& mix, const std::filesystem::path& out_dir,
                    const EmitOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const Split split = mix.stage == Stage::Test ? Split::Test : Split::Train;
  const char* split_label = split_name(split);

  // Work out which RAVEN-backed sources are requested; they share puzzles.
  RavenPlan raven;
  std::vector<const SourceSpec*> external;
  for (const auto& src : mix.sources) {
    if (src.name == "RAVEN-VQA" || src.name == "RAVEN-CoT") {
      if (src.count % kPatternCount != 0) {
        throw ValidationError(src.name + " count " + std::to_string(src.count) +
                              " not divisible across the 7 patterns");
      }
      const long long per = src.count / kPatternCount;
      if (raven.per_pattern != 0 && raven.per_pattern != per) {
        throw ValidationError("RAVEN-VQA and RAVEN-CoT counts must match");
      }
      raven.per_pattern = per;
      (src.name == "RAVEN-VQA" ? raven.vqa : raven.cot) = true;
    } else {
      external.push_back(&src);
    }
  }

  std::vector<ConversationRecord> records;
  std::vector<std::string> puzzle_ids;

  if (raven.per_pattern > 0) {
    const std::size_t total = static_cast<std::size_t>(raven.per_pattern) * kPatternCount;
    std::vector<ConversationRecord> vqa(raven.vqa ? total : 0);
    std::vector<ConversationRecord> cot(raven.cot ? total : 0);
    std::vector<std::string> ids(total);

    if (options.write_images) {
      for (const char* ds : {"RAVEN-VQA", "RAVEN-CoT"}) {
        if ((std::string(ds) == "RAVEN-VQA" && raven.vqa) ||
            (std::string(ds) == "RAVEN-CoT" && raven.cot)) {
          fs::create_directories(out_dir / "images" / ds);
        }
      }
    }

    parallel_for(total, options.workers, [&](std::size_t i) {
      const int pattern_index = static_cast<int>(i / raven.per_pattern);
      const std::uint64_t index_in_pattern = i % raven.per_pattern;
      const auto pattern = static_cast<PatternId>(pattern_index);
      const std::uint64_t seed =
          derive_seed(mix.master_seed, split_label, pattern_index, index_in_pattern);
      const PuzzleRecord puzzle = generate_puzzle(pattern, seed, split);
      ids[i] = puzzle.puzzle_id;

      if (raven.vqa) {
        Rng qa_rng = Rng(seed).fork("qa");
        const auto items = synth_perception_qa(puzzle, options.qa_mode, qa_rng);
        vqa[i] = vqa_record(puzzle, items, "RAVEN-VQA", mix.stage);
        if (options.write_images) {
          RenderConfig cfg = options.render;
          cfg.composition = Composition::ContextOnly;
          png::write_file(out_dir / vqa[i].image, render_quiz(puzzle, cfg).image);
        }
      }
      if (raven.cot) {
        cot[i] = cot_record(puzzle, "RAVEN-CoT", mix.stage);
        if (options.write_images) {
          RenderConfig cfg = options.render;
          cfg.composition = Composition::FullQuiz;
          png::write_file(out_dir / cot[i].image, render_quiz(puzzle, cfg).image);
        }
      }
    });

    records.insert(records.end(), vqa.begin(), vqa.end());
    records.insert(records.end(), cot.begin(), cot.end());
    puzzle_ids = ids;
  }

  for (const SourceSpec* src : external) {
    auto it = options.external_sources.find(src->name);
    if (it == options.external_sources.end()) {
      throw ValidationError(src->name +
                            " is an ingest-only dataset; no external file supplied");
    }
    std::ifstream f(it->second);
    if (!f) throw std::runtime_error("cannot read external source file " + it->second);
    nlohmann::json items;
    f >> items;
    std::vector<std::string> rejections;
    auto ingested = ingest_external(items, src->name, &rejections);
    if (static_cast<long long>(ingested.size()) < src->count) {
      throw ValidationError(src->name + ": requested " + std::to_string(src->count) +
                            " records but only " + std::to_string(ingested.size()) +
                            " valid items available");
    }
    ingested.resize(static_cast<std::size_t>(src->count));
    records.insert(records.end(), ingested.begin(), ingested.end());
  }

  // Declared-test leak guard.
  if (!options.test_digest_path.empty()) {
    std::ifstream f(options.test_digest_path);
    if (!f) throw std::runtime_error("cannot read test digest " + options.test_digest_path);
    nlohmann::json digest;
    f >> digest;
    std::set<std::string> held_out;
    for (const auto& id : digest) held_out.insert(id.get<std::string>());
    std::vector<std::string> leaks;
    for (const auto& rec : records) {
      const std::string pid = rec.meta.value("puzzle_id", "");
      if (held_out.count(pid)) leaks.push_back(rec.id);
    }
    if (!leaks.empty()) {
      std::string msg = "test leak: " + std::to_string(leaks.size()) + " records [";
      for (std::size_t i = 0; i < leaks.size() && i < 8; ++i) {
        if (i) msg += ", ";
        msg += leaks[i];
      }
      msg += leaks.size() > 8 ? ", ...]" : "]";
      throw std::runtime_error(msg);
    }
  }

  // Order-stable sink: sort by id, then one seeded shuffle.
  std::sort(records.begin(), records.end(),
            [](const ConversationRecord& a, const ConversationRecord& b) {
              return a.id < b.id;
            });
  Rng shuffle_rng = Rng(mix.shuffle_seed).fork("record-shuffle");
  shuffle_rng.shuffle(records);

  const std::string jsonl_name = std::string(stage_name(mix.stage)) + ".jsonl";
  {
    std::ofstream out(out_dir / jsonl_name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / jsonl_name).string());
    for (const auto& rec : records) {
      out << conversation_to_json(rec).dump() << "\n";
    }
  }

  std::map<std::string, long long> per_source;
  for (const auto& rec : records) {
    per_source[rec.meta.value("dataset_name", std::string(rec.id, 0, rec.id.find('/')))]++;
  }
  std::sort(puzzle_ids.begin(), puzzle_ids.end());
  puzzle_ids.erase(std::unique(puzzle_ids.begin(), puzzle_ids.end()), puzzle_ids.end());
  std::string digest_input;
  for (const auto& id : puzzle_ids) digest_input += id;

  nlohmann::json manifest = {
      {"stage", stage_name(mix.stage)},
      {"master_seed", mix.master_seed},
      {"shuffle_seed", mix.shuffle_seed},
      {"config_hash", digest_hex(fnv1a64(mixture_to_json(mix).dump()))},
      {"records_file", jsonl_name},
      {"record_count", records.size()},
      {"per_source", per_source},
      {"puzzle_ids", puzzle_ids},
      {"symbolic_digest", digest_hex(fnv1a64(digest_input))},
      {"qa_mode", elicitation_mode_name(options.qa_mode)},
  };
  {
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << "\n";
  }
  return manifest;
}

}  // namespace avrgen
