#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "avrgen/qa.hpp"
#include "avrgen/render.hpp"

namespace avrgen {

enum class Stage : std::uint8_t { Stage1 = 0, Stage2, Test };

const char* stage_name(Stage s);
std::optional<Stage> stage_from_name(std::string_view name);

struct SourceSpec {
  std::string name;  // RAVEN-VQA, RAVEN-CoT generated; CCSE-* ingest-only
  long long count = 0;
};

struct MixtureSpec {
  Stage stage = Stage::Stage1;
  std::vector<SourceSpec> sources;
  std::uint64_t master_seed = 1;
  std::uint64_t shuffle_seed = 1;
};

MixtureSpec mixture_from_json(const nlohmann::json& j);
nlohmann::json mixture_to_json(const MixtureSpec& mix);

// Config file may declare several stages; loading asserts that stage-2 keeps
// every perception (VQA) source used in stage-1.
std::map<std::string, MixtureSpec> load_mixture_config(const nlohmann::json& j);

struct ConversationTurn {
  std::string role;  // "human" or "gpt"
  std::string text;
};

struct ConversationRecord {
  std::string id;
  std::string image;  // relative path; empty for text-only records
  std::vector<ConversationTurn> conversations;
  nlohmann::json meta;
};

nlohmann::json conversation_to_json(const ConversationRecord& rec);
ConversationRecord conversation_from_json(const nlohmann::json& j);

struct EmitOptions {
  int workers = 1;
  bool write_images = true;
  ElicitationMode qa_mode = ElicitationMode::ElicitShuffle;
  RenderConfig render;
  // Dataset name -> JSONL/JSON path for ingest-only (CCSE-*) sources.
  std::map<std::string, std::string> external_sources;
  // Path to a JSON array of held-out puzzle ids; emit refuses on overlap.
  std::string test_digest_path;
};

// Writes <stage>.jsonl, images/<dataset>/<id>.png and manifest.json under
// out_dir; returns the manifest. Deterministic for fixed (mix, options);
// worker count never changes the bytes.
nlohmann::json emit(const MixtureSpec& mix, const std::filesystem::path& out_dir,
                    const EmitOptions& options);

// Validates and converts pre-annotated external items; rejected items are
// reported per-item, duplicates (by image+answer content hash) dropped.
std::vector<ConversationRecord> ingest_external(const nlohmann::json& items,
                                                const std::string& dataset_name,
                                                std::vector<std::string>* rejections);

}  // namespace avrgen
