#pragma once

#include <vector>

#include "avrgen/rules.hpp"

namespace avrgen {

// Per rule slot, every legal rule consistent with the two complete context
// rows. The admissible hypothesis set is the cross product of the slot option
// lists; it is kept factored because slot consistency is independent.
struct SlotInduction {
  int component_index = 0;
  RuleSlot slot = RuleSlot::NumPos;
  std::vector<RuleSpec> options;
};

struct Induction {
  std::vector<SlotInduction> slots;

  // True when some slot admits no rule, i.e. no hypothesis explains the rows.
  bool empty() const;
  bool contains(const RuleBundle& bundle) const;
  std::size_t hypothesis_count() const;
  // Materialized bundles (desk scale only; throws if more than limit).
  std::vector<RuleBundle> hypotheses(std::size_t limit = 100000) const;
};

Induction induce(const std::array<const Cell*, 8>& context, const SeedPattern& pattern);

// 1-based positions of candidates whose substitution into the final cell
// satisfies at least one admissible hypothesis.
std::vector<int> solve(const std::array<const Cell*, 8>& context,
                       const std::vector<Cell>& candidates, const SeedPattern& pattern);

}  // namespace avrgen
