#pragma once

#include <string>
#include <vector>

#include "avrgen/puzzle.hpp"

namespace avrgen {

enum class QAKind : std::uint8_t { GlobalContext = 0, FineGrained };
enum class ElicitationMode : std::uint8_t { BaseShuffle = 0, ElicitShuffle, ElicitSequential };

const char* elicitation_mode_name(ElicitationMode m);
std::optional<ElicitationMode> elicitation_mode_from_name(std::string_view name);

// Question templates are versioned; bump when wording changes so emitted
// datasets can be told apart.
constexpr char kQATemplateVersion[] = "qa-templates-v1";

enum class QAAttribute : std::uint8_t { Count = 0, Shape, Size, Color };

struct QAItem {
  std::string id;
  std::string question;
  std::string answer;  // closed vocabulary: a shape name or a decimal integer
  QAKind kind = QAKind::FineGrained;
  int order_index = 0;
  ElicitationMode mode = ElicitationMode::ElicitShuffle;
  // Provenance used to recompute the answer from the record.
  int cell = -1;       // 0..8 row-major; -1 for the global item
  int component = -1;  // -1 for the global item
  QAAttribute attribute = QAAttribute::Count;
};

// One global structure item (omitted in base mode) plus per-cell fine-grained
// items over all 9 cells of the completed matrix; answers come from the
// record, never from pixels.
std::vector<QAItem> synth_perception_qa(const PuzzleRecord& record, ElicitationMode mode,
                                        Rng& rng);

// Recomputes every item's answer from the record; exact text match required.
struct ConsistencyReport {
  int checked = 0;
  std::vector<std::string> mismatched_ids;
  bool ok() const { return mismatched_ids.empty(); }
};

ConsistencyReport qa_self_consistency(const std::vector<QAItem>& items,
                                      const PuzzleRecord& record);

// Ground-truth answer text for one fine-grained probe.
std::string qa_answer_text(const PuzzleRecord& record, int cell, int component,
                           QAAttribute attribute);
std::string qa_global_answer_text(const PuzzleRecord& record);

}  // namespace avrgen
