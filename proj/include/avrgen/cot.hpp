#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "avrgen/puzzle.hpp"

namespace avrgen {

// Conditional multi-task prefixes; exact strings, matched verbatim by tests.
constexpr char kNonRegularPrefix[] = "This is a non-regular puzzle.";
std::string regular_prefix(PatternId pattern);  // "... a [G-2] style."

constexpr char kCoTTemplateVersion[] = "cot-templates-v1";

struct CoTRecord {
  std::string prefix;
  std::vector<std::string> steps;  // one per component x rule slot
  std::string conclusion;
  int final_answer = 1;  // 1..8, equals the record's answer_position

  std::string full_text() const;
};

CoTRecord synth_cot(const PuzzleRecord& record);

// Hook for externally annotated non-regular items. Throws ValidationError if
// the item is flagged regular or the prefix is already present.
std::string prefix_nonregular(const nlohmann::json& item, const std::string& cot_body);

}  // namespace avrgen
