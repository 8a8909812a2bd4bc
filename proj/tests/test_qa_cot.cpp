#include <algorithm>

#include "doctest.h"

#include "avrgen/cot.hpp"
#include "avrgen/qa.hpp"

using namespace avrgen;

namespace {

std::vector<QAItem> canonical_fine_order(const PuzzleRecord& rec) {
  // Row-major cells, components in order, attributes Count/Shape/Size/Color.
  Rng rng(0);
  return synth_perception_qa(rec, ElicitationMode::ElicitSequential, rng);
}

}  // namespace

TEST_CASE("elicitation mode structure") {
  const PuzzleRecord rec = generate_puzzle(PatternId::OIC, 321, Split::Train);
  const int comps = 2;
  const int fine_count = 9 * comps * 4;

  SUBCASE("base_shuffle omits the global item") {
    Rng rng(1);
    const auto items = synth_perception_qa(rec, ElicitationMode::BaseShuffle, rng);
    REQUIRE(items.size() == fine_count);
    for (const auto& it : items) CHECK(it.kind == QAKind::FineGrained);
  }

  SUBCASE("elicit modes lead with the global structure question") {
    for (auto mode : {ElicitationMode::ElicitShuffle, ElicitationMode::ElicitSequential}) {
      Rng rng(1);
      const auto items = synth_perception_qa(rec, mode, rng);
      REQUIRE(items.size() == fine_count + 1);
      CHECK(items[0].kind == QAKind::GlobalContext);
      CHECK(items[0].question == "What is the structure of this puzzle?");
      CHECK(items[0].answer == "a 3x3 grid of panels in O-IC style");
      for (std::size_t i = 1; i < items.size(); ++i) {
        CHECK(items[i].kind == QAKind::FineGrained);
      }
    }
  }

  SUBCASE("sequential order is row-major and exhaustive") {
    Rng rng(1);
    const auto items = synth_perception_qa(rec, ElicitationMode::ElicitSequential, rng);
    int idx = 0;
    for (int cell = 0; cell < 9; ++cell) {
      for (int ci = 0; ci < comps; ++ci) {
        for (int a = 0; a < 4; ++a) {
          const auto& it = items[1 + idx];
          CHECK(it.cell == cell);
          CHECK(it.component == ci);
          CHECK(static_cast<int>(it.attribute) == a);
          CHECK(it.order_index == 1 + idx);
          ++idx;
        }
      }
    }
  }

  SUBCASE("shuffled order differs from sequential but covers the same probes") {
    Rng rng(1);
    const auto shuffled = synth_perception_qa(rec, ElicitationMode::ElicitShuffle, rng);
    const auto sequential = canonical_fine_order(rec);
    REQUIRE(shuffled.size() == sequential.size());
    auto ids = [](const std::vector<QAItem>& v) {
      std::vector<std::string> out;
      for (const auto& it : v) out.push_back(it.id);
      return out;
    };
    auto a = ids(shuffled), b = ids(sequential);
    CHECK(a != b);  // 72 items; an identical permutation is astronomically unlikely
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }

  SUBCASE("shuffle is seed-deterministic") {
    Rng r1(9);
    Rng r2(9);
    Rng r3(10);
    const auto a = synth_perception_qa(rec, ElicitationMode::ElicitShuffle, r1);
    const auto b = synth_perception_qa(rec, ElicitationMode::ElicitShuffle, r2);
    const auto c = synth_perception_qa(rec, ElicitationMode::ElicitShuffle, r3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i].id == c[i].id;
    CHECK_FALSE(same);
  }
}

TEST_CASE("two-component patterns phrase inner and outer regions") {
  const PuzzleRecord rec = generate_puzzle(PatternId::OIG, 5, Split::Train);
  Rng rng(1);
  const auto items = synth_perception_qa(rec, ElicitationMode::ElicitSequential, rng);
  bool outer = false, inner = false;
  for (const auto& it : items) {
    if (it.question.find("outer region") != std::string::npos) outer = true;
    if (it.question.find("inner region") != std::string::npos) inner = true;
  }
  CHECK(outer);
  CHECK(inner);

  const PuzzleRecord single = generate_puzzle(PatternId::G3, 5, Split::Train);
  Rng rng2(1);
  for (const auto& it :
       synth_perception_qa(single, ElicitationMode::ElicitSequential, rng2)) {
    CHECK(it.question.find("region") == std::string::npos);
  }
}

TEST_CASE("qa self-consistency holds on honest items and trips on mutations") {
  for (int p = 0; p < kPatternCount; ++p) {
    const PuzzleRecord rec =
        generate_puzzle(static_cast<PatternId>(p), 900 + p, Split::Train);
    Rng rng(p);
    auto items = synth_perception_qa(rec, ElicitationMode::ElicitShuffle, rng);
    CHECK(qa_self_consistency(items, rec).ok());

    // Mutated answer text must be caught.
    auto broken = items;
    broken[3].answer = broken[3].answer + "x";
    const auto rep = qa_self_consistency(broken, rec);
    REQUIRE(rep.mismatched_ids.size() == 1);
    CHECK(rep.mismatched_ids[0] == broken[3].id);

    // An item pointing outside the record's structure is a mismatch, not a crash.
    auto oob = items;
    oob[1].component = 5;
    CHECK_FALSE(qa_self_consistency(oob, rec).ok());
  }
}

TEST_CASE("qa answers are recomputable closed-vocabulary strings") {
  const PuzzleRecord rec = generate_puzzle(PatternId::G2, 77, Split::Train);
  Rng rng(1);
  for (const auto& it : synth_perception_qa(rec, ElicitationMode::BaseShuffle, rng)) {
    if (it.attribute == QAAttribute::Shape) {
      CHECK(shape_from_name(it.answer).has_value());
    } else {
      CHECK(it.answer.find_first_not_of("0123456789") == std::string::npos);
    }
    CHECK(it.answer == qa_answer_text(rec, it.cell, it.component, it.attribute));
  }
}

TEST_CASE("regular CoT prefix is exactly the template string") {
  CHECK(regular_prefix(PatternId::Center) ==
        "This is a regular puzzle. The grid pattern is a [Center] style.");
  CHECK(regular_prefix(PatternId::G2) ==
        "This is a regular puzzle. The grid pattern is a [G-2] style.");
  CHECK(regular_prefix(PatternId::OIG) ==
        "This is a regular puzzle. The grid pattern is a [O-IG] style.");
  CHECK(std::string(kNonRegularPrefix) == "This is a non-regular puzzle.");
}

TEST_CASE("synth_cot structure and faithfulness") {
  for (int p = 0; p < kPatternCount; ++p) {
    const auto pattern = static_cast<PatternId>(p);
    const PuzzleRecord rec = generate_puzzle(pattern, 3000 + p, Split::Train);
    const CoTRecord cot = synth_cot(rec);

    CHECK(cot.prefix == regular_prefix(pattern));
    // One step per component per rule slot.
    CHECK(cot.steps.size() == rec.rules.per_component.size() * kRuleSlotCount);
    CHECK(cot.final_answer == rec.answer_position);

    const std::string text = cot.full_text();
    CHECK(text.rfind(cot.prefix, 0) == 0);
    const std::string verdict =
        "The correct choice for this puzzle is " + std::to_string(rec.answer_position) + ".";
    CHECK(text.find(verdict) != std::string::npos);

    // Faithfulness: the conclusion describes the actual answer cell.
    const auto& attrs = rec.answer.components[0].entities.front().attrs;
    CHECK(cot.conclusion.find(shape_name(attrs.shape)) != std::string::npos);
    CHECK(cot.conclusion.find("size level " + std::to_string(attrs.size)) !=
          std::string::npos);
    CHECK(cot.conclusion.find("color level " + std::to_string(attrs.color)) !=
          std::string::npos);
  }
}

TEST_CASE("synth_cot is deterministic") {
  const PuzzleRecord rec = generate_puzzle(PatternId::LR, 64, Split::Train);
  CHECK(synth_cot(rec).full_text() == synth_cot(rec).full_text());
}

TEST_CASE("non-regular prefixing guards") {
  nlohmann::json item = {{"regular", false}};
  const std::string body = "Count the sides of each shape.";
  const std::string prefixed = prefix_nonregular(item, body);
  CHECK(prefixed == std::string(kNonRegularPrefix) + " " + body);
  CHECK_THROWS_AS(prefix_nonregular(item, prefixed), ValidationError);

  nlohmann::json regular_item = {{"regular", true}};
  CHECK_THROWS_AS(prefix_nonregular(regular_item, body), ValidationError);
}
