#pragma once

#include <array>

#include "avrgen/rules.hpp"

namespace avrgen {

struct BuiltMatrix {
  std::array<Cell, 9> cells;  // row-major; cells[8] is the answer cell
  const Cell& answer() const { return cells[8]; }
  std::array<const Cell*, 8> context_view() const {
    std::array<const Cell*, 8> out;
    for (int i = 0; i < 8; ++i) out[i] = &cells[i];
    return out;
  }
};

// Materializes a full 3x3 matrix satisfying the bundle. Row bases are sampled
// with rejection (never clamped); throws GenerationError naming the offending
// rule when no in-range base is found after the attempt budget.
BuiltMatrix build_matrix(const SeedPattern& pattern, const RuleBundle& bundle, Rng& rng);

// One row of the matrix (rows coordinate through substreams derived from the
// same rng identity, so distribute-three value sets agree across rows).
std::array<Cell, 3> apply_rule_row(const SeedPattern& pattern, const RuleBundle& bundle,
                                   int row_index, Rng& rng);

}  // namespace avrgen
