#include "avrgen/rules.hpp"

#include <algorithm>
#include <set>

namespace avrgen {

const char* rule_attribute_name(RuleAttribute a) {
  switch (a) {
    case RuleAttribute::Number: return "number";
    case RuleAttribute::Position: return "position";
    case RuleAttribute::Shape: return "shape_type";
    case RuleAttribute::Size: return "size";
    case RuleAttribute::Color: return "color";
  }
  return "?";
}

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Constant: return "constant";
    case RuleKind::Progression: return "progression";
    case RuleKind::Arithmetic: return "arithmetic";
    case RuleKind::DistributeThree: return "distribute_three";
  }
  return "?";
}

std::optional<RuleAttribute> rule_attribute_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(RuleAttribute::Color); ++i) {
    auto a = static_cast<RuleAttribute>(i);
    if (name == rule_attribute_name(a)) return a;
  }
  return std::nullopt;
}

std::optional<RuleKind> rule_kind_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(RuleKind::DistributeThree); ++i) {
    auto k = static_cast<RuleKind>(i);
    if (name == rule_kind_name(k)) return k;
  }
  return std::nullopt;
}

std::string rule_to_string(const RuleSpec& r) {
  std::string s = rule_attribute_name(r.attribute);
  s += "/";
  s += rule_kind_name(r.kind);
  if (r.parameter != 0) {
    s += r.parameter > 0 ? "(+" : "(";
    s += std::to_string(r.parameter);
    s += ")";
  }
  return s;
}

int attribute_domain_lo(RuleAttribute attr, int capacity) {
  switch (attr) {
    case RuleAttribute::Number: return 1;
    case RuleAttribute::Shape: return 0;
    case RuleAttribute::Size: return kSizeMin;
    case RuleAttribute::Color: return kColorMin;
    default: return 0;
  }
}

int attribute_domain_hi(RuleAttribute attr, int capacity) {
  switch (attr) {
    case RuleAttribute::Number: return capacity;
    case RuleAttribute::Shape: return kShapeLevels - 1;
    case RuleAttribute::Size: return kSizeMax;
    case RuleAttribute::Color: return kColorMax;
    default: return 0;
  }
}

std::vector<RuleSpec> legal_numpos_rules(int capacity) {
  std::vector<RuleSpec> out;
  out.push_back({RuleAttribute::Number, RuleKind::Constant, 0});
  out.push_back({RuleAttribute::Position, RuleKind::Constant, 0});
  if (capacity >= 2) {
    out.push_back({RuleAttribute::Number, RuleKind::Arithmetic, +1});
    out.push_back({RuleAttribute::Number, RuleKind::Arithmetic, -1});
  }
  if (capacity >= 3) {
    out.push_back({RuleAttribute::Number, RuleKind::Progression, +1});
    out.push_back({RuleAttribute::Number, RuleKind::Progression, -1});
    out.push_back({RuleAttribute::Number, RuleKind::DistributeThree, 0});
    out.push_back({RuleAttribute::Position, RuleKind::DistributeThree, 0});
  }
  if (capacity >= 5) {
    out.push_back({RuleAttribute::Number, RuleKind::Progression, +2});
    out.push_back({RuleAttribute::Number, RuleKind::Progression, -2});
  }
  return out;
}

std::vector<RuleSpec> legal_value_rules(RuleAttribute attr) {
  std::vector<RuleSpec> out;
  out.push_back({attr, RuleKind::Constant, 0});
  for (int p : {+1, -1, +2, -2}) out.push_back({attr, RuleKind::Progression, p});
  if (attr != RuleAttribute::Shape) {
    out.push_back({attr, RuleKind::Arithmetic, +1});
    out.push_back({attr, RuleKind::Arithmetic, -1});
  }
  out.push_back({attr, RuleKind::DistributeThree, 0});
  return out;
}

RuleBundle sample_rule_bundle(const SeedPattern& pattern, Rng& rng) {
  RuleBundle bundle;
  for (std::size_t ci = 0; ci < pattern.components.size(); ++ci) {
    const int capacity = pattern.components[ci].capacity();
    ComponentRules cr;
    cr.component_index = static_cast<int>(ci);
    Rng sub = rng.fork("component", ci);
    {
      Rng slot_rng = sub.fork("numpos");
      cr.rules[0] = slot_rng.pick(legal_numpos_rules(capacity));
    }
    const RuleAttribute attrs[3] = {RuleAttribute::Shape, RuleAttribute::Size,
                                    RuleAttribute::Color};
    for (int i = 0; i < 3; ++i) {
      Rng slot_rng = sub.fork(rule_attribute_name(attrs[i]));
      cr.rules[i + 1] = slot_rng.pick(legal_value_rules(attrs[i]));
    }
    bundle.per_component.push_back(cr);
  }
  return bundle;
}

CompView view_of(const SymbolicPanel& panel) {
  CompView v;
  v.count = panel.number();
  v.mask = panel.occupancy();
  if (panel.entities.empty()) return v;
  bool same_shape = true, same_size = true, same_color = true;
  const auto& first = panel.entities.front().attrs;
  for (const auto& e : panel.entities) {
    if (e.attrs.shape != first.shape) same_shape = false;
    if (e.attrs.size != first.size) same_size = false;
    if (e.attrs.color != first.color) same_color = false;
  }
  if (same_shape) v.shape = static_cast<int>(first.shape);
  if (same_size) v.size = first.size;
  if (same_color) v.color = first.color;
  return v;
}

namespace {

bool triple_satisfies(int v0, int v1, int v2, RuleKind kind, int param) {
  switch (kind) {
    case RuleKind::Constant: return v0 == v1 && v1 == v2;
    case RuleKind::Progression: return v1 - v0 == param && v2 - v1 == param;
    case RuleKind::Arithmetic: return v2 == v0 + param * v1;
    case RuleKind::DistributeThree: return v0 != v1 && v1 != v2 && v0 != v2;
  }
  return false;
}

std::optional<std::array<int, 3>> row_values(const std::array<const SymbolicPanel*, 3>& row,
                                             RuleAttribute attr) {
  std::array<int, 3> out{};
  for (int i = 0; i < 3; ++i) {
    CompView v = view_of(*row[i]);
    switch (attr) {
      case RuleAttribute::Number: out[i] = v.count; break;
      case RuleAttribute::Position: out[i] = static_cast<int>(v.mask); break;
      case RuleAttribute::Shape:
        if (!v.shape) return std::nullopt;
        out[i] = *v.shape;
        break;
      case RuleAttribute::Size:
        if (!v.size) return std::nullopt;
        out[i] = *v.size;
        break;
      case RuleAttribute::Color:
        if (!v.color) return std::nullopt;
        out[i] = *v.color;
        break;
    }
  }
  return out;
}

}  // namespace

bool check_rule_row(const std::array<const SymbolicPanel*, 3>& row, const RuleSpec& spec) {
  auto vals = row_values(row, spec.attribute);
  if (!vals) return false;
  if (spec.attribute == RuleAttribute::Position) {
    // Position supports only identity and distribute-three semantics.
    switch (spec.kind) {
      case RuleKind::Constant:
        return (*vals)[0] == (*vals)[1] && (*vals)[1] == (*vals)[2];
      case RuleKind::DistributeThree:
        return (*vals)[0] != (*vals)[1] && (*vals)[1] != (*vals)[2] &&
               (*vals)[0] != (*vals)[2];
      default: return false;
    }
  }
  return triple_satisfies((*vals)[0], (*vals)[1], (*vals)[2], spec.kind, spec.parameter);
}

namespace {

bool check_rule_rows(const std::vector<std::array<const SymbolicPanel*, 3>>& rows,
                     const RuleSpec& spec) {
  std::vector<std::array<int, 3>> grid;
  for (const auto& row : rows) {
    auto vals = row_values(row, spec.attribute);
    if (!vals) return false;
    grid.push_back(*vals);
    if (!check_rule_row(row, spec)) return false;
  }
  if (spec.kind == RuleKind::DistributeThree) {
    // Shared 3-value set, each value at most once per column (Latin square).
    std::set<int> base(grid[0].begin(), grid[0].end());
    for (std::size_t r = 1; r < grid.size(); ++r) {
      if (std::set<int>(grid[r].begin(), grid[r].end()) != base) return false;
    }
    for (int c = 0; c < 3; ++c) {
      for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = a + 1; b < grid.size(); ++b) {
          if (grid[a][c] == grid[b][c]) return false;
        }
      }
    }
  }
  return true;
}

bool check_rule_matrix(const std::array<const SymbolicPanel*, 9>& panels,
                       const RuleSpec& spec) {
  std::vector<std::array<const SymbolicPanel*, 3>> rows;
  for (int r = 0; r < 3; ++r) {
    rows.push_back({panels[r * 3], panels[r * 3 + 1], panels[r * 3 + 2]});
  }
  return check_rule_rows(rows, spec);
}

}  // namespace

bool check_rule_cells(const std::array<const Cell*, 9>& cells, int component_index,
                      const RuleSpec& spec) {
  std::array<const SymbolicPanel*, 9> panels;
  for (int i = 0; i < 9; ++i) {
    if (component_index >= static_cast<int>(cells[i]->components.size())) return false;
    panels[i] = &cells[i]->components[component_index];
  }
  return check_rule_matrix(panels, spec);
}

bool check_rule_context(const std::array<const Cell*, 8>& context, int component_index,
                        const RuleSpec& spec) {
  std::vector<std::array<const SymbolicPanel*, 3>> rows;
  for (int r = 0; r < 2; ++r) {
    std::array<const SymbolicPanel*, 3> row;
    for (int c = 0; c < 3; ++c) {
      const Cell* cell = context[r * 3 + c];
      if (component_index >= static_cast<int>(cell->components.size())) return false;
      row[c] = &cell->components[component_index];
    }
    rows.push_back(row);
  }
  return check_rule_rows(rows, spec);
}

bool check_bundle_matrix(const std::array<const Cell*, 9>& cells, const RuleBundle& bundle) {
  for (const auto& cr : bundle.per_component) {
    const int ci = cr.component_index;
    std::array<const SymbolicPanel*, 9> panels;
    for (int i = 0; i < 9; ++i) {
      if (ci >= static_cast<int>(cells[i]->components.size())) return false;
      panels[i] = &cells[i]->components[ci];
    }
    for (const auto& rule : cr.rules) {
      if (!check_rule_matrix(panels, rule)) return false;
    }
  }
  return true;
}

bool candidate_completes(const std::array<const Cell*, 8>& context, const Cell& candidate,
                         const RuleBundle& bundle) {
  std::array<const Cell*, 9> cells;
  for (int i = 0; i < 8; ++i) cells[i] = context[i];
  cells[8] = &candidate;
  return check_bundle_matrix(cells, bundle);
}

}  // namespace avrgen
