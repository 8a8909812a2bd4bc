#include "avrgen/matrix.hpp"

#include <algorithm>
#include <numeric>

namespace avrgen {

namespace {

constexpr int kBaseAttempts = 1000;

using Grid = std::array<std::array<int, 3>, 3>;

[[noreturn]] void infeasible(const RuleSpec& spec) {
  throw GenerationError("no in-range base for rule " + rule_to_string(spec));
}

// 3x3 value grid satisfying a value-scale rule (also used for counts).
Grid plan_value_grid(const RuleSpec& spec, int lo, int hi, Rng& rng) {
  Grid g{};
  switch (spec.kind) {
    case RuleKind::Constant: {
      for (int r = 0; r < 3; ++r) {
        int v = rng.range(lo, hi);
        g[r] = {v, v, v};
      }
      break;
    }
    case RuleKind::Progression: {
      const int p = spec.parameter;
      for (int r = 0; r < 3; ++r) {
        int base = 0;
        bool ok = false;
        for (int attempt = 0; attempt < kBaseAttempts && !ok; ++attempt) {
          base = rng.range(lo, hi);
          ok = base + 2 * p >= lo && base + 2 * p <= hi && base + p >= lo && base + p <= hi;
        }
        if (!ok) infeasible(spec);
        g[r] = {base, base + p, base + 2 * p};
      }
      break;
    }
    case RuleKind::Arithmetic: {
      const int s = spec.parameter;
      for (int r = 0; r < 3; ++r) {
        bool ok = false;
        for (int attempt = 0; attempt < kBaseAttempts && !ok; ++attempt) {
          int a = rng.range(lo, hi);
          int b = rng.range(lo, hi);
          int c = a + s * b;
          if (c >= lo && c <= hi) {
            g[r] = {a, b, c};
            ok = true;
          }
        }
        if (!ok) infeasible(spec);
      }
      break;
    }
    case RuleKind::DistributeThree: {
      if (hi - lo + 1 < 3) infeasible(spec);
      std::vector<int> domain(hi - lo + 1);
      std::iota(domain.begin(), domain.end(), lo);
      rng.shuffle(domain);
      std::array<int, 3> vals = {domain[0], domain[1], domain[2]};
      std::vector<int> perm = {0, 1, 2};
      rng.shuffle(perm);
      const int dir = rng.coin() ? 1 : 2;  // cyclic shift direction
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) g[r][c] = vals[perm[(c + r * dir) % 3]];
      }
      break;
    }
  }
  return g;
}

std::uint32_t random_mask(int capacity, int count, Rng& rng) {
  std::vector<int> slots(capacity);
  std::iota(slots.begin(), slots.end(), 0);
  rng.shuffle(slots);
  std::uint32_t mask = 0;
  for (int i = 0; i < count; ++i) mask |= 1u << slots[i];
  return mask;
}

// Per-cell occupancy masks for the number/position rule slot.
std::array<std::uint32_t, 9> plan_masks(const RuleSpec& spec, int capacity, Rng& rng) {
  std::array<std::uint32_t, 9> masks{};
  if (spec.attribute == RuleAttribute::Number) {
    Grid counts = plan_value_grid(spec, 1, capacity, rng);
    Rng mask_rng = rng.fork("cell-masks");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        Rng cell_rng = mask_rng.fork("cell", r * 3 + c);
        masks[r * 3 + c] = random_mask(capacity, counts[r][c], cell_rng);
      }
    }
    return masks;
  }
  // Position rules.
  if (spec.kind == RuleKind::Constant) {
    for (int r = 0; r < 3; ++r) {
      Rng row_rng = rng.fork("row-mask", r);
      int count = row_rng.range(1, capacity);
      std::uint32_t m = random_mask(capacity, count, row_rng);
      masks[r * 3] = masks[r * 3 + 1] = masks[r * 3 + 2] = m;
    }
    return masks;
  }
  // Position distribute-three: 3 distinct equal-count masks in a Latin square.
  std::vector<int> counts_with_room;
  for (int k = 1; k <= capacity; ++k) {
    long long combos = 1;
    for (int i = 0; i < k; ++i) combos = combos * (capacity - i) / (i + 1);
    if (combos >= 3) counts_with_room.push_back(k);
  }
  if (counts_with_room.empty()) infeasible(spec);
  const int k = rng.pick(counts_with_room);
  std::array<std::uint32_t, 3> set{};
  for (int i = 0; i < 3; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kBaseAttempts) infeasible(spec);
      std::uint32_t m = random_mask(capacity, k, rng);
      if (std::find(set.begin(), set.begin() + i, m) == set.begin() + i) {
        set[i] = m;
        break;
      }
    }
  }
  std::vector<int> perm = {0, 1, 2};
  rng.shuffle(perm);
  const int dir = rng.coin() ? 1 : 2;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) masks[r * 3 + c] = set[perm[(c + r * dir) % 3]];
  }
  return masks;
}

struct ComponentPlan {
  std::array<std::uint32_t, 9> masks;
  Grid shape, size, color;
};

ComponentPlan plan_component(const Layout& layout, const ComponentRules& cr, Rng& rng) {
  ComponentPlan plan;
  const int capacity = layout.capacity();
  {
    Rng sub = rng.fork("numpos");
    plan.masks = plan_masks(cr.rules[static_cast<int>(RuleSlot::NumPos)], capacity, sub);
  }
  const struct {
    RuleSlot slot;
    RuleAttribute attr;
    Grid ComponentPlan::*field;
  } value_slots[] = {
      {RuleSlot::Shape, RuleAttribute::Shape, &ComponentPlan::shape},
      {RuleSlot::Size, RuleAttribute::Size, &ComponentPlan::size},
      {RuleSlot::Color, RuleAttribute::Color, &ComponentPlan::color},
  };
  for (const auto& vs : value_slots) {
    Rng sub = rng.fork(rule_attribute_name(vs.attr));
    const RuleSpec& spec = cr.rules[static_cast<int>(vs.slot)];
    plan.*(vs.field) = plan_value_grid(spec, attribute_domain_lo(vs.attr, capacity),
                                       attribute_domain_hi(vs.attr, capacity), sub);
  }
  return plan;
}

SymbolicPanel materialize_panel(const Layout& layout, const ComponentPlan& plan, int cell) {
  SymbolicPanel panel;
  panel.layout = layout;
  const int r = cell / 3, c = cell % 3;
  for (int slot = 0; slot < layout.capacity(); ++slot) {
    if (plan.masks[cell] & (1u << slot)) {
      Entity e;
      e.slot_index = slot;
      e.attrs.shape = static_cast<ShapeType>(plan.shape[r][c]);
      e.attrs.size = plan.size[r][c];
      e.attrs.color = plan.color[r][c];
      e.attrs.angle = 0;
      panel.entities.push_back(e);
    }
  }
  return panel;
}

std::vector<ComponentPlan> plan_all(const SeedPattern& pattern, const RuleBundle& bundle,
                                    Rng& rng) {
  std::vector<ComponentPlan> plans;
  for (const auto& cr : bundle.per_component) {
    Rng sub = rng.fork("component", cr.component_index);
    plans.push_back(plan_component(pattern.components[cr.component_index], cr, sub));
  }
  return plans;
}

Cell materialize_cell(const SeedPattern& pattern, const std::vector<ComponentPlan>& plans,
                      int cell) {
  Cell out;
  for (std::size_t ci = 0; ci < plans.size(); ++ci) {
    out.components.push_back(materialize_panel(pattern.components[ci], plans[ci], cell));
  }
  return out;
}

}  // namespace

BuiltMatrix build_matrix(const SeedPattern& pattern, const RuleBundle& bundle, Rng& rng) {
  auto plans = plan_all(pattern, bundle, rng);
  BuiltMatrix m;
  for (int cell = 0; cell < 9; ++cell) m.cells[cell] = materialize_cell(pattern, plans, cell);
  return m;
}

std::array<Cell, 3> apply_rule_row(const SeedPattern& pattern, const RuleBundle& bundle,
                                   int row_index, Rng& rng) {
  auto plans = plan_all(pattern, bundle, rng);
  std::array<Cell, 3> row;
  for (int c = 0; c < 3; ++c) row[c] = materialize_cell(pattern, plans, row_index * 3 + c);
  return row;
}

}  // namespace avrgen
