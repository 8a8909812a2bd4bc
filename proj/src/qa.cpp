#include "avrgen/qa.hpp"

#include <algorithm>

namespace avrgen {

const char* elicitation_mode_name(ElicitationMode m) {
  switch (m) {
    case ElicitationMode::BaseShuffle: return "base_shuffle";
    case ElicitationMode::ElicitShuffle: return "elicit_shuffle";
    case ElicitationMode::ElicitSequential: return "elicit_sequential";
  }
  return "?";
}

std::optional<ElicitationMode> elicitation_mode_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ElicitationMode::ElicitSequential); ++i) {
    auto m = static_cast<ElicitationMode>(i);
    if (name == elicitation_mode_name(m)) return m;
  }
  return std::nullopt;
}

namespace {

const Cell& matrix_cell(const PuzzleRecord& record, int cell) {
  return cell < 8 ? record.context[cell] : record.answer;
}

std::string region_phrase(const PuzzleRecord& record, int component) {
  if (seed_pattern(record.pattern).components.size() < 2) return "";
  return component == 0 ? "outer region of the " : "inner region of the ";
}

std::string location_phrase(const PuzzleRecord& record, int cell, int component) {
  return region_phrase(record, component) + "panel at row " + std::to_string(cell / 3 + 1) +
         ", column " + std::to_string(cell % 3 + 1);
}

std::string question_text(const PuzzleRecord& record, int cell, int component,
                          QAAttribute attr) {
  const std::string loc = location_phrase(record, cell, component);
  switch (attr) {
    case QAAttribute::Count: return "How many shapes are in the " + loc + "?";
    case QAAttribute::Shape: return "What shape is in the " + loc + "?";
    case QAAttribute::Size: return "What is the size level of the shapes in the " + loc + "?";
    case QAAttribute::Color:
      return "What is the color level of the shapes in the " + loc + "?";
  }
  return "";
}

}  // namespace

std::string qa_answer_text(const PuzzleRecord& record, int cell, int component,
                           QAAttribute attribute) {
  if (cell < 0 || cell > 8) throw ValidationError("qa probe outside record structure");
  const Cell& c = matrix_cell(record, cell);
  if (component < 0 || component >= static_cast<int>(c.components.size())) {
    throw ValidationError("qa probe outside record structure");
  }
  const SymbolicPanel& panel = c.components[component];
  switch (attribute) {
    case QAAttribute::Count: return std::to_string(panel.number());
    case QAAttribute::Shape: return shape_name(panel.entities.front().attrs.shape);
    case QAAttribute::Size: return std::to_string(panel.entities.front().attrs.size);
    case QAAttribute::Color: return std::to_string(panel.entities.front().attrs.color);
  }
  return "";
}

std::string qa_global_answer_text(const PuzzleRecord& record) {
  return std::string("a 3x3 grid of panels in ") + pattern_name(record.pattern) + " style";
}

std::vector<QAItem> synth_perception_qa(const PuzzleRecord& record, ElicitationMode mode,
                                        Rng& rng) {
  const auto& pattern = seed_pattern(record.pattern);
  std::vector<QAItem> fine;
  for (int cell = 0; cell < 9; ++cell) {
    for (int ci = 0; ci < static_cast<int>(pattern.components.size()); ++ci) {
      for (QAAttribute attr : {QAAttribute::Count, QAAttribute::Shape, QAAttribute::Size,
                               QAAttribute::Color}) {
        QAItem item;
        item.kind = QAKind::FineGrained;
        item.mode = mode;
        item.cell = cell;
        item.component = ci;
        item.attribute = attr;
        item.question = question_text(record, cell, ci, attr);
        item.answer = qa_answer_text(record, cell, ci, attr);
        item.id = record.puzzle_id + "/qa/" + std::to_string(cell) + "/" +
                  std::to_string(ci) + "/" + std::to_string(static_cast<int>(attr));
        fine.push_back(std::move(item));
      }
    }
  }

  if (mode != ElicitationMode::ElicitSequential) {
    Rng shuffle_rng = rng.fork("qa-shuffle");
    shuffle_rng.shuffle(fine);
  }

  std::vector<QAItem> out;
  if (mode != ElicitationMode::BaseShuffle) {
    QAItem global;
    global.kind = QAKind::GlobalContext;
    global.mode = mode;
    global.question = "What is the structure of this puzzle?";
    global.answer = qa_global_answer_text(record);
    global.id = record.puzzle_id + "/qa/global";
    out.push_back(std::move(global));
  }
  out.insert(out.end(), fine.begin(), fine.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].order_index = static_cast<int>(i);
  return out;
}

ConsistencyReport qa_self_consistency(const std::vector<QAItem>& items,
                                      const PuzzleRecord& record) {
  ConsistencyReport rep;
  for (const auto& item : items) {
    ++rep.checked;
    std::string expected;
    try {
      expected = item.kind == QAKind::GlobalContext
                     ? qa_global_answer_text(record)
                     : qa_answer_text(record, item.cell, item.component, item.attribute);
    } catch (const ValidationError&) {
      rep.mismatched_ids.push_back(item.id);
      continue;
    }
    if (item.answer != expected) rep.mismatched_ids.push_back(item.id);
  }
  return rep;
}

}  // namespace avrgen
