#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "avrgen/rng.hpp"
#include "avrgen/symbolic.hpp"

namespace avrgen {

enum class RuleAttribute : std::uint8_t { Number = 0, Position, Shape, Size, Color };
enum class RuleKind : std::uint8_t { Constant = 0, Progression, Arithmetic, DistributeThree };

const char* rule_attribute_name(RuleAttribute a);
const char* rule_kind_name(RuleKind k);
std::optional<RuleAttribute> rule_attribute_from_name(std::string_view name);
std::optional<RuleKind> rule_kind_from_name(std::string_view name);

struct RuleSpec {
  RuleAttribute attribute = RuleAttribute::Number;
  RuleKind kind = RuleKind::Constant;
  int parameter = 0;  // progression step in {-2,-1,+1,+2}; arithmetic sign in {+1,-1}
  bool operator==(const RuleSpec&) const = default;
};

std::string rule_to_string(const RuleSpec& r);

// One component is governed by exactly four rule slots: a number-or-position
// rule plus one rule each for shape, size and color. Angle is frozen and never
// governed.
constexpr int kRuleSlotCount = 4;
enum class RuleSlot : int { NumPos = 0, Shape = 1, Size = 2, Color = 3 };

struct ComponentRules {
  int component_index = 0;
  std::array<RuleSpec, kRuleSlotCount> rules;  // indexed by RuleSlot
};

struct RuleBundle {
  std::vector<ComponentRules> per_component;
  bool operator==(const RuleBundle&) const = default;
};

inline bool operator==(const ComponentRules& a, const ComponentRules& b) {
  return a.component_index == b.component_index && a.rules == b.rules;
}

// Pruned legal (attribute, kind, parameter) tables. The number/position slot
// depends on the component's slot capacity; arithmetic on position and any
// rule on shape arithmetic or angle are excluded.
std::vector<RuleSpec> legal_numpos_rules(int capacity);
std::vector<RuleSpec> legal_value_rules(RuleAttribute attr);

// Uniform over the legal table of each slot of each component.
RuleBundle sample_rule_bundle(const SeedPattern& pattern, Rng& rng);

// --- Independent checker -----------------------------------------------------
// Written directly from the rule definitions; the generator plans values and
// never calls into these, so constructor/checker agreement is a real check.

struct CompView {
  int count = 0;
  std::uint32_t mask = 0;
  std::optional<int> shape, size, color;  // empty when entities disagree
};

CompView view_of(const SymbolicPanel& panel);

// Row-local satisfaction of one rule over one component's three panels.
// DistributeThree checks pairwise distinctness only; the cross-row Latin
// property is checked by check_bundle_matrix.
bool check_rule_row(const std::array<const SymbolicPanel*, 3>& row, const RuleSpec& spec);

// All 9 cells row-major. Checks every rule on every row plus the cross-row
// distribute-three constraints (shared value set, Latin columns).
bool check_bundle_matrix(const std::array<const Cell*, 9>& cells, const RuleBundle& bundle);

// Context cells 0..7 (row-major, cell 8 missing) plus a candidate for cell 8.
bool candidate_completes(const std::array<const Cell*, 8>& context, const Cell& candidate,
                         const RuleBundle& bundle);

// Single rule over one component of a full 9-cell matrix, including the
// cross-row distribute-three constraints.
bool check_rule_cells(const std::array<const Cell*, 9>& cells, int component_index,
                      const RuleSpec& spec);

// Same, restricted to the two complete context rows (used for induction).
bool check_rule_context(const std::array<const Cell*, 8>& context, int component_index,
                        const RuleSpec& spec);

int attribute_domain_lo(RuleAttribute attr, int capacity);
int attribute_domain_hi(RuleAttribute attr, int capacity);

}  // namespace avrgen
