#include "avrgen/solver.hpp"

#include <algorithm>
#include <functional>

namespace avrgen {

bool Induction::empty() const {
  for (const auto& s : slots) {
    if (s.options.empty()) return true;
  }
  return false;
}

bool Induction::contains(const RuleBundle& bundle) const {
  for (const auto& cr : bundle.per_component) {
    for (int slot = 0; slot < kRuleSlotCount; ++slot) {
      const auto it = std::find_if(slots.begin(), slots.end(), [&](const SlotInduction& s) {
        return s.component_index == cr.component_index &&
               static_cast<int>(s.slot) == slot;
      });
      if (it == slots.end()) return false;
      if (std::find(it->options.begin(), it->options.end(), cr.rules[slot]) ==
          it->options.end()) {
        return false;
      }
    }
  }
  return true;
}

std::size_t Induction::hypothesis_count() const {
  std::size_t n = 1;
  for (const auto& s : slots) n *= s.options.size();
  return n;
}

std::vector<RuleBundle> Induction::hypotheses(std::size_t limit) const {
  if (hypothesis_count() > limit) {
    throw GenerationError("hypothesis space exceeds materialization limit");
  }
  const int ncomp = slots.empty() ? 0 : slots.back().component_index + 1;
  std::vector<RuleBundle> out;
  RuleBundle current;
  current.per_component.resize(ncomp);
  for (int ci = 0; ci < ncomp; ++ci) current.per_component[ci].component_index = ci;

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      out.push_back(current);
      return;
    }
    const auto& s = slots[i];
    for (const auto& opt : s.options) {
      current.per_component[s.component_index].rules[static_cast<int>(s.slot)] = opt;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

namespace {

std::vector<RuleSpec> slot_candidates(RuleSlot slot, int capacity) {
  switch (slot) {
    case RuleSlot::NumPos: return legal_numpos_rules(capacity);
    case RuleSlot::Shape: return legal_value_rules(RuleAttribute::Shape);
    case RuleSlot::Size: return legal_value_rules(RuleAttribute::Size);
    case RuleSlot::Color: return legal_value_rules(RuleAttribute::Color);
  }
  return {};
}

}  // namespace

Induction induce(const std::array<const Cell*, 8>& context, const SeedPattern& pattern) {
  Induction ind;
  for (std::size_t ci = 0; ci < pattern.components.size(); ++ci) {
    const int capacity = pattern.components[ci].capacity();
    for (int slot = 0; slot < kRuleSlotCount; ++slot) {
      SlotInduction si;
      si.component_index = static_cast<int>(ci);
      si.slot = static_cast<RuleSlot>(slot);
      for (const auto& spec : slot_candidates(si.slot, capacity)) {
        if (check_rule_context(context, si.component_index, spec)) {
          si.options.push_back(spec);
        }
      }
      ind.slots.push_back(si);
    }
  }
  return ind;
}

std::vector<int> solve(const std::array<const Cell*, 8>& context,
                       const std::vector<Cell>& candidates, const SeedPattern& pattern) {
  const Induction ind = induce(context, pattern);
  std::vector<int> solved;
  if (ind.empty()) return solved;

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    std::array<const Cell*, 9> cells;
    for (int i = 0; i < 8; ++i) cells[i] = context[i];
    cells[8] = &candidates[k];

    // Slot consistency is independent, so a candidate satisfies some admissible
    // hypothesis iff every slot has at least one option it also satisfies.
    bool ok = true;
    for (const auto& s : ind.slots) {
      bool slot_ok = false;
      for (const auto& opt : s.options) {
        if (check_rule_cells(cells, s.component_index, opt)) {
          slot_ok = true;
          break;
        }
      }
      if (!slot_ok) {
        ok = false;
        break;
      }
    }
    if (ok) solved.push_back(static_cast<int>(k) + 1);
  }
  return solved;
}

}  // namespace avrgen
