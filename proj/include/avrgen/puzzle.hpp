#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "avrgen/matrix.hpp"
#include "avrgen/rules.hpp"

namespace avrgen {

enum class Split : std::uint8_t { Train = 0, Test };

const char* split_name(Split s);

struct PuzzleRecord {
  std::string puzzle_id;  // content hash; independent of candidate shuffling
  PatternId pattern = PatternId::Center;
  std::uint64_t master_seed = 0;
  Split split = Split::Train;
  std::vector<Cell> context;      // 8 cells, row-major
  Cell answer;
  std::vector<Cell> distractors;  // 7
  RuleBundle rules;
  int answer_position = 1;  // 1..8 within the shuffled candidate list

  std::array<const Cell*, 8> context_view() const;
  // Candidates in presentation order (answer at answer_position).
  std::vector<Cell> candidates() const;
};

// Deterministic end-to-end: same (pattern, master_seed, split) yields a
// byte-identical record. The emitted puzzle is oracle-certified unique.
PuzzleRecord generate_puzzle(PatternId pattern, std::uint64_t master_seed, Split split);

// Perturbs 1-2 governed attributes of the answer; every distractor fails the
// bundle when substituted into the final cell and all are pairwise distinct.
std::vector<Cell> make_distractors(const Cell& answer, const RuleBundle& bundle,
                                   const std::array<const Cell*, 8>& context,
                                   const SeedPattern& pattern, Rng& rng);

nlohmann::json puzzle_to_json(const PuzzleRecord& record);
PuzzleRecord puzzle_from_json(const nlohmann::json& j);

nlohmann::json cell_to_json(const Cell& cell);
Cell cell_from_json(const nlohmann::json& j);
nlohmann::json bundle_to_json(const RuleBundle& bundle);
RuleBundle bundle_from_json(const nlohmann::json& j);

}  // namespace avrgen
