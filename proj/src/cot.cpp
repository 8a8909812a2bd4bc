#include "avrgen/cot.hpp"

#include "avrgen/rules.hpp"

namespace avrgen {

std::string regular_prefix(PatternId pattern) {
  return std::string("This is a regular puzzle. The grid pattern is a [") +
         pattern_name(pattern) + "] style.";
}

std::string CoTRecord::full_text() const {
  std::string out = prefix;
  for (const auto& s : steps) {
    out += "\n";
    out += s;
  }
  out += "\n";
  out += conclusion;
  return out;
}

namespace {

const Cell& matrix_cell(const PuzzleRecord& record, int cell) {
  return cell < 8 ? record.context[cell] : record.answer;
}

int cell_value(const PuzzleRecord& record, int cell, int component, RuleAttribute attr) {
  CompView v = view_of(matrix_cell(record, cell).components[component]);
  switch (attr) {
    case RuleAttribute::Number: return v.count;
    case RuleAttribute::Shape: return v.shape.value_or(-1);
    case RuleAttribute::Size: return v.size.value_or(-1);
    case RuleAttribute::Color: return v.color.value_or(-1);
    default: return 0;
  }
}

std::string value_str(RuleAttribute attr, int v) {
  if (attr == RuleAttribute::Shape) return shape_name(static_cast<ShapeType>(v));
  return std::to_string(v);
}

std::string triple_str(RuleAttribute attr, int a, int b, int c) {
  return "(" + value_str(attr, a) + ", " + value_str(attr, b) + ", " + value_str(attr, c) +
         ")";
}

std::string attr_phrase(RuleAttribute attr) {
  switch (attr) {
    case RuleAttribute::Number: return "number of shapes";
    case RuleAttribute::Shape: return "shape type";
    case RuleAttribute::Size: return "size level";
    case RuleAttribute::Color: return "color level";
    default: return "position";
  }
}

std::string region_phrase(const PuzzleRecord& record, int component) {
  if (seed_pattern(record.pattern).components.size() < 2) return "";
  return component == 0 ? " in the outer region" : " in the inner region";
}

std::string verbalize_rule(const PuzzleRecord& record, int component, const RuleSpec& spec) {
  const std::string region = region_phrase(record, component);
  if (spec.attribute == RuleAttribute::Position) {
    if (spec.kind == RuleKind::Constant) {
      return "The shapes" + region +
             " keep the same slot positions across each row, so the missing panel reuses "
             "the slot positions of row 3.";
    }
    return "Three slot arrangements" + region +
           " are distributed so each appears exactly once per row and column, so the "
           "missing panel takes the arrangement row 3 has not shown yet.";
  }

  const RuleAttribute attr = spec.attribute;
  auto v = [&](int cell) { return cell_value(record, cell, component, attr); };
  const std::string t1 = triple_str(attr, v(0), v(1), v(2));
  const std::string t2 = triple_str(attr, v(3), v(4), v(5));
  const std::string r3 = "(" + value_str(attr, v(6)) + ", " + value_str(attr, v(7)) + ")";
  const std::string predicted = value_str(attr, v(8));

  std::string s = "Looking at the " + attr_phrase(attr) + region + ": row 1 shows " + t1 +
                  " and row 2 shows " + t2 + "; ";
  switch (spec.kind) {
    case RuleKind::Constant:
      s += "the value stays constant within each row.";
      break;
    case RuleKind::Progression:
      s += "the value " +
           std::string(spec.parameter > 0 ? "increases by " : "decreases by ") +
           std::to_string(spec.parameter > 0 ? spec.parameter : -spec.parameter) +
           " from panel to panel.";
      break;
    case RuleKind::Arithmetic:
      s += std::string("the third value equals the first ") +
           (spec.parameter > 0 ? "plus" : "minus") + " the second.";
      break;
    case RuleKind::DistributeThree:
      s += "the same three values are distributed so each appears exactly once per row "
           "and column.";
      break;
  }
  s += " Row 3 starts with " + r3 + ", so the missing panel has " + attr_phrase(attr) +
       " " + predicted + ".";
  return s;
}

std::string describe_cell(const PuzzleRecord& record, const Cell& cell) {
  std::string out;
  const bool two = cell.components.size() > 1;
  for (std::size_t ci = 0; ci < cell.components.size(); ++ci) {
    const auto& panel = cell.components[ci];
    const auto& attrs = panel.entities.front().attrs;
    if (ci > 0) out += "; ";
    if (two) out += ci == 0 ? "outer: " : "inner: ";
    out += std::to_string(panel.number()) + " " + shape_name(attrs.shape) +
           (panel.number() > 1 ? "s" : "") + " with size level " +
           std::to_string(attrs.size) + " and color level " + std::to_string(attrs.color);
  }
  return out;
}

}  // namespace

CoTRecord synth_cot(const PuzzleRecord& record) {
  CoTRecord cot;
  cot.prefix = regular_prefix(record.pattern);
  for (const auto& cr : record.rules.per_component) {
    for (const auto& spec : cr.rules) {
      cot.steps.push_back(verbalize_rule(record, cr.component_index, spec));
    }
  }
  cot.conclusion = "Therefore the missing panel is " + describe_cell(record, record.answer) +
                   ". The correct choice for this puzzle is " +
                   std::to_string(record.answer_position) + ".";
  cot.final_answer = record.answer_position;
  return cot;
}

std::string prefix_nonregular(const nlohmann::json& item, const std::string& cot_body) {
  if (item.value("regular", false)) {
    throw ValidationError("item is flagged regular; non-regular prefix refused");
  }
  if (cot_body.rfind(kNonRegularPrefix, 0) == 0) {
    throw ValidationError("non-regular prefix already present");
  }
  return std::string(kNonRegularPrefix) + " " + cot_body;
}

}  // namespace avrgen
