#include <map>
#include <set>

#include "doctest.h"

#include "avrgen/encoding.hpp"
#include "avrgen/rng.hpp"
#include "avrgen/symbolic.hpp"

using namespace avrgen;

TEST_CASE("rng forks are identity-derived, not state-derived") {
  Rng a(42);
  Rng b(42);
  (void)a.next();
  (void)a.next();  // consuming the parent must not shift forks
  CHECK(a.fork("x").next() == b.fork("x").next());
  CHECK(a.fork("x").next() != a.fork("y").next());
  CHECK(a.fork("x", 0).next() != a.fork("x", 1).next());
}

TEST_CASE("rng uniform stays in range and covers the range") {
  Rng r(7);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    int v = r.range(3, 9);
    CHECK(v >= 3);
    CHECK(v <= 9);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("derive_seed separates namespaces") {
  CHECK(derive_seed(1, "train", 0, 0) != derive_seed(1, "test", 0, 0));
  CHECK(derive_seed(1, "train", 0, 0) != derive_seed(1, "train", 1, 0));
  CHECK(derive_seed(1, "train", 0, 0) != derive_seed(1, "train", 0, 1));
  CHECK(derive_seed(1, "train", 2, 5) == derive_seed(1, "train", 2, 5));
}

TEST_CASE("seed pattern catalog has the seven fixed patterns") {
  const auto& cat = seed_pattern_catalog();
  REQUIRE(cat.size() == 7);
  const char* names[] = {"Center", "G-2", "G-3", "L-R", "U-D", "O-IC", "O-IG"};
  const std::size_t comps[] = {1, 1, 1, 1, 1, 2, 2};
  const int cap0[] = {1, 4, 9, 2, 2, 1, 1};
  for (int i = 0; i < 7; ++i) {
    CHECK(pattern_name(cat[i].id) == doctest::String(names[i]));
    CHECK(pattern_from_name(names[i]) == static_cast<PatternId>(i));
    REQUIRE(cat[i].components.size() == comps[i]);
    CHECK(cat[i].components[0].capacity() == cap0[i]);
  }
  CHECK(cat[5].components[1].capacity() == 1);  // O-IC inner
  CHECK(cat[6].components[1].capacity() == 4);  // O-IG inner grid
  CHECK_FALSE(pattern_from_name("bogus").has_value());
}

TEST_CASE("catalog geometry passes panel validation in every slot-occupancy") {
  for (const auto& pat : seed_pattern_catalog()) {
    for (const auto& layout : pat.components) {
      SymbolicPanel p;
      p.layout = layout;
      for (int s = 0; s < layout.capacity(); ++s) {
        p.entities.push_back(Entity{s, {}});
      }
      CHECK_NOTHROW(validate_panel(p));
    }
  }
}

TEST_CASE("validate_panel names violated invariants") {
  SymbolicPanel p;
  p.layout = seed_pattern(PatternId::Center).components[0];

  CHECK_THROWS_WITH_AS(validate_panel(p), "occupancy has no filled slot", ValidationError);

  p.entities.push_back(Entity{0, {}});
  p.entities.push_back(Entity{0, {}});
  CHECK_THROWS_WITH_AS(validate_panel(p), "duplicate slot_index", ValidationError);

  p.entities.pop_back();
  p.entities[0].attrs.size = kSizeMax + 1;
  CHECK_THROWS_WITH_AS(validate_panel(p), "size outside range", ValidationError);

  p.entities[0].attrs.size = kSizeMin;
  p.entities[0].attrs.color = kColorMax + 1;
  CHECK_THROWS_WITH_AS(validate_panel(p), "color outside range", ValidationError);

  p.entities[0].attrs.color = 0;
  p.entities[0].slot_index = 5;
  CHECK_THROWS_WITH_AS(validate_panel(p), "slot_index outside layout", ValidationError);

  SymbolicPanel overlap;
  overlap.layout.slots = {SlotBox{0, 0, 5000, 5000}, SlotBox{4000, 0, 5000, 5000}};
  overlap.entities.push_back(Entity{0, {}});
  CHECK_THROWS_WITH_AS(validate_panel(overlap), "slot boxes overlap", ValidationError);
}

namespace {

Cell sample_cell(const SeedPattern& pattern, Rng& rng) {
  Cell cell;
  for (const auto& layout : pattern.components) {
    SymbolicPanel p;
    p.layout = layout;
    const int cap = layout.capacity();
    const int count = rng.range(1, cap);
    std::vector<int> slots(cap);
    for (int s = 0; s < cap; ++s) slots[s] = s;
    rng.shuffle(slots);
    for (int k = 0; k < count; ++k) {
      Entity e;
      e.slot_index = slots[k];
      e.attrs.shape = static_cast<ShapeType>(rng.range(0, kShapeLevels - 1));
      e.attrs.size = rng.range(kSizeMin, kSizeMax);
      e.attrs.color = rng.range(kColorMin, kColorMax);
      p.entities.push_back(e);
    }
    canonicalize(p);
    cell.components.push_back(std::move(p));
  }
  return cell;
}

}  // namespace

TEST_CASE("canonical encoding round-trips and is order independent") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto& pattern = seed_pattern_catalog()[i % 7];
    Cell cell = sample_cell(pattern, rng);
    const std::string enc = canonical_encoding(cell);
    CHECK(enc.substr(0, 7) == kSymMagic);
    Cell back = decode_cell(enc);
    CHECK(back == cell);
    CHECK(canonical_encoding(back) == enc);

    // Reversing entity order must not change the encoding.
    Cell scrambled = cell;
    for (auto& p : scrambled.components) {
      std::reverse(p.entities.begin(), p.entities.end());
    }
    CHECK(canonical_encoding(scrambled) == enc);
  }
}

TEST_CASE("canonical encoding collision sweep over random distinct cells") {
  Rng rng(123);
  std::map<std::string, Cell> by_encoding;
  std::set<std::uint64_t> digests;
  int collisions = 0;
  const int kTrials = 100000;
  for (int i = 0; i < kTrials; ++i) {
    const auto& pattern = seed_pattern_catalog()[i % 7];
    Cell cell = sample_cell(pattern, rng);
    const std::string enc = canonical_encoding(cell);
    auto [it, inserted] = by_encoding.emplace(enc, cell);
    if (!inserted) {
      // Same encoding must mean same cell (injectivity on content).
      CHECK(it->second == cell);
    } else if (!digests.insert(encoding_digest(enc)).second) {
      ++collisions;  // distinct encoding, same 64-bit digest
    }
  }
  CHECK(collisions == 0);
}

TEST_CASE("decode_cell rejects malformed bytes") {
  Rng rng(5);
  Cell cell = sample_cell(seed_pattern(PatternId::G2), rng);
  std::string enc = canonical_encoding(cell);

  CHECK_THROWS_AS(decode_cell("garbage"), ValidationError);
  CHECK_THROWS_AS(decode_cell(enc.substr(0, enc.size() - 3)), ValidationError);
  CHECK_THROWS_AS(decode_cell(enc + "xx"), ValidationError);

  std::string bad_magic = enc;
  bad_magic[0] = 'Z';
  CHECK_THROWS_AS(decode_cell(bad_magic), ValidationError);
}

TEST_CASE("digest_hex is 16 lowercase hex characters") {
  const std::string h = digest_hex(fnv1a64("probe"));
  CHECK(h.size() == 16);
  for (char c : h) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  CHECK(digest_hex(0) == "0000000000000000");
}
