#include "avrgen/puzzle.hpp"

#include <algorithm>

#include "avrgen/encoding.hpp"
#include "avrgen/solver.hpp"

namespace avrgen {

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

std::array<const Cell*, 8> PuzzleRecord::context_view() const {
  std::array<const Cell*, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = &context[i];
  return out;
}

std::vector<Cell> PuzzleRecord::candidates() const {
  std::vector<Cell> out;
  std::size_t d = 0;
  for (int pos = 1; pos <= 8; ++pos) {
    if (pos == answer_position) {
      out.push_back(answer);
    } else {
      out.push_back(distractors[d++]);
    }
  }
  return out;
}

namespace {

constexpr int kBundleAttempts = 20;
constexpr int kDistractorSetAttempts = 50;
constexpr int kPerturbAttempts = 200;

std::string content_hash_input(PatternId pattern, const std::vector<Cell>& context,
                               const Cell& answer, const std::vector<Cell>& distractors) {
  std::string bytes = "AVRPUZ1";
  bytes.push_back(static_cast<char>(pattern));
  for (const auto& c : context) bytes += canonical_encoding(c);
  bytes += canonical_encoding(answer);
  std::vector<std::string> d;
  for (const auto& c : distractors) d.push_back(canonical_encoding(c));
  std::sort(d.begin(), d.end());
  for (const auto& e : d) bytes += e;
  return bytes;
}

enum class PerturbKind { Shape, Size, Color, Count, Mask };

struct PerturbTarget {
  int component;
  PerturbKind kind;
};

std::vector<PerturbTarget> perturb_targets(const SeedPattern& pattern) {
  std::vector<PerturbTarget> out;
  for (std::size_t ci = 0; ci < pattern.components.size(); ++ci) {
    const int c = static_cast<int>(ci);
    out.push_back({c, PerturbKind::Shape});
    out.push_back({c, PerturbKind::Size});
    out.push_back({c, PerturbKind::Color});
    if (pattern.components[ci].capacity() > 1) {
      out.push_back({c, PerturbKind::Count});
      out.push_back({c, PerturbKind::Mask});
    }
  }
  return out;
}

std::uint32_t sample_mask(int capacity, int count, Rng& rng) {
  std::vector<int> slots(capacity);
  for (int i = 0; i < capacity; ++i) slots[i] = i;
  rng.shuffle(slots);
  std::uint32_t mask = 0;
  for (int i = 0; i < count; ++i) mask |= 1u << slots[i];
  return mask;
}

void rebuild_entities(SymbolicPanel& panel, std::uint32_t mask) {
  AttributeValue attrs = panel.entities.front().attrs;
  panel.entities.clear();
  for (int slot = 0; slot < panel.layout.capacity(); ++slot) {
    if (mask & (1u << slot)) panel.entities.push_back(Entity{slot, attrs});
  }
}

void apply_perturbation(Cell& cell, const PerturbTarget& t, Rng& rng) {
  SymbolicPanel& panel = cell.components[t.component];
  const int capacity = panel.layout.capacity();
  switch (t.kind) {
    case PerturbKind::Shape: {
      int cur = static_cast<int>(panel.entities.front().attrs.shape);
      int next = (cur + 1 + rng.range(0, kShapeLevels - 2)) % kShapeLevels;
      for (auto& e : panel.entities) e.attrs.shape = static_cast<ShapeType>(next);
      break;
    }
    case PerturbKind::Size: {
      int cur = panel.entities.front().attrs.size;
      int span = kSizeMax - kSizeMin + 1;
      int next = kSizeMin + (cur - kSizeMin + 1 + rng.range(0, span - 2)) % span;
      for (auto& e : panel.entities) e.attrs.size = next;
      break;
    }
    case PerturbKind::Color: {
      int cur = panel.entities.front().attrs.color;
      int span = kColorMax - kColorMin + 1;
      int next = kColorMin + (cur - kColorMin + 1 + rng.range(0, span - 2)) % span;
      for (auto& e : panel.entities) e.attrs.color = next;
      break;
    }
    case PerturbKind::Count: {
      int cur = panel.number();
      int next = 1 + (cur - 1 + 1 + rng.range(0, capacity - 2)) % capacity;
      rebuild_entities(panel, sample_mask(capacity, next, rng));
      break;
    }
    case PerturbKind::Mask: {
      std::uint32_t cur = panel.occupancy();
      std::uint32_t next = cur;
      for (int i = 0; i < 64 && next == cur; ++i) {
        next = sample_mask(capacity, panel.number(), rng);
      }
      rebuild_entities(panel, next);
      break;
    }
  }
}

}  // namespace

std::vector<Cell> make_distractors(const Cell& answer, const RuleBundle& bundle,
                                   const std::array<const Cell*, 8>& context,
                                   const SeedPattern& pattern, Rng& rng) {
  const auto targets = perturb_targets(pattern);
  const std::string answer_enc = canonical_encoding(answer);

  std::vector<Cell> out;
  std::vector<std::string> encodings = {answer_enc};
  for (int d = 0; d < 7; ++d) {
    bool accepted = false;
    for (int attempt = 0; attempt < kPerturbAttempts && !accepted; ++attempt) {
      Rng sub = rng.fork("distractor", d * 1024 + attempt);
      Cell cell = answer;
      const int nperturb = sub.range(1, 2);
      std::vector<PerturbTarget> pool = targets;
      sub.shuffle(pool);
      for (int i = 0; i < nperturb && i < static_cast<int>(pool.size()); ++i) {
        apply_perturbation(cell, pool[i], sub);
      }
      canonicalize(cell);
      std::string enc = canonical_encoding(cell);
      if (std::find(encodings.begin(), encodings.end(), enc) != encodings.end()) continue;
      if (candidate_completes(context, cell, bundle)) continue;
      encodings.push_back(enc);
      out.push_back(std::move(cell));
      accepted = true;
    }
    if (!accepted) throw GenerationError("could not perturb a distinct failing distractor");
  }
  return out;
}

PuzzleRecord generate_puzzle(PatternId pattern, std::uint64_t master_seed, Split split) {
  const SeedPattern& sp = seed_pattern(pattern);
  Rng root = Rng(master_seed).fork(pattern_name(pattern));

  for (int battempt = 0; battempt < kBundleAttempts; ++battempt) {
    Rng brng = root.fork("bundle", battempt);
    RuleBundle bundle = sample_rule_bundle(sp, brng);
    BuiltMatrix matrix;
    try {
      Rng mrng = root.fork("matrix", battempt);
      matrix = build_matrix(sp, bundle, mrng);
    } catch (const GenerationError&) {
      continue;
    }
    const auto ctx = matrix.context_view();

    for (int dattempt = 0; dattempt < kDistractorSetAttempts; ++dattempt) {
      std::vector<Cell> distractors;
      try {
        Rng drng = root.fork("distractor-set", battempt * 1024 + dattempt);
        distractors = make_distractors(matrix.answer(), bundle, ctx, sp, drng);
      } catch (const GenerationError&) {
        continue;
      }

      std::vector<Cell> unshuffled = {matrix.answer()};
      unshuffled.insert(unshuffled.end(), distractors.begin(), distractors.end());
      const auto solved = solve(ctx, unshuffled, sp);
      if (solved.size() != 1 || solved[0] != 1) continue;  // not uniquely solvable

      PuzzleRecord rec;
      rec.pattern = pattern;
      rec.master_seed = master_seed;
      rec.split = split;
      rec.context.assign(matrix.cells.begin(), matrix.cells.begin() + 8);
      rec.answer = matrix.answer();
      rec.rules = bundle;

      // Presentation shuffle draws from its own purpose stream so candidate
      // order never feeds back into content.
      std::vector<int> order = {0, 1, 2, 3, 4, 5, 6, 7};
      Rng prng = root.fork("presentation");
      prng.shuffle(order);
      int pos = 0;
      for (int i = 0; i < 8; ++i) {
        if (order[i] == 0) pos = i + 1;
      }
      rec.answer_position = pos;
      rec.distractors.clear();
      for (int i = 0; i < 8; ++i) {
        if (order[i] != 0) rec.distractors.push_back(distractors[order[i] - 1]);
      }
      rec.puzzle_id = digest_hex(encoding_digest(
          content_hash_input(pattern, rec.context, rec.answer, rec.distractors)));
      return rec;
    }
  }
  throw GenerationError(std::string("exhausted bundle resamples for pattern ") +
                        pattern_name(pattern));
}

nlohmann::json cell_to_json(const Cell& cell) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& p : cell.components) {
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& b : p.layout.slots) slots.push_back({b.x, b.y, b.w, b.h});
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : p.entities) {
      ents.push_back({{"slot", e.slot_index},
                      {"shape", shape_name(e.attrs.shape)},
                      {"size", e.attrs.size},
                      {"color", e.attrs.color},
                      {"angle", e.attrs.angle}});
    }
    comps.push_back({{"layout", layout_kind_name(p.layout.kind)},
                     {"slots", slots},
                     {"entities", ents}});
  }
  return {{"components", comps}};
}

Cell cell_from_json(const nlohmann::json& j) {
  Cell cell;
  for (const auto& pj : j.at("components")) {
    SymbolicPanel panel;
    const std::string kind = pj.at("layout").get<std::string>();
    bool found = false;
    for (int k = 0; k <= static_cast<int>(LayoutKind::OutInGrid); ++k) {
      if (kind == layout_kind_name(static_cast<LayoutKind>(k))) {
        panel.layout.kind = static_cast<LayoutKind>(k);
        found = true;
      }
    }
    if (!found) throw ValidationError("unknown layout kind: " + kind);
    for (const auto& sj : pj.at("slots")) {
      panel.layout.slots.push_back(SlotBox{sj.at(0), sj.at(1), sj.at(2), sj.at(3)});
    }
    for (const auto& ej : pj.at("entities")) {
      Entity e;
      e.slot_index = ej.at("slot");
      auto shape = shape_from_name(ej.at("shape").get<std::string>());
      if (!shape) throw ValidationError("unknown shape name");
      e.attrs.shape = *shape;
      e.attrs.size = ej.at("size");
      e.attrs.color = ej.at("color");
      e.attrs.angle = ej.value("angle", 0);
      panel.entities.push_back(e);
    }
    canonicalize(panel);
    validate_panel(panel);
    cell.components.push_back(std::move(panel));
  }
  return cell;
}

nlohmann::json bundle_to_json(const RuleBundle& bundle) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cr : bundle.per_component) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : cr.rules) {
      rules.push_back({{"attribute", rule_attribute_name(r.attribute)},
                       {"kind", rule_kind_name(r.kind)},
                       {"parameter", r.parameter}});
    }
    out.push_back({{"component", cr.component_index}, {"rules", rules}});
  }
  return out;
}

RuleBundle bundle_from_json(const nlohmann::json& j) {
  RuleBundle bundle;
  for (const auto& cj : j) {
    ComponentRules cr;
    cr.component_index = cj.at("component");
    int i = 0;
    for (const auto& rj : cj.at("rules")) {
      if (i >= kRuleSlotCount) throw ValidationError("too many rule slots");
      RuleSpec spec;
      auto attr = rule_attribute_from_name(rj.at("attribute").get<std::string>());
      auto kind = rule_kind_from_name(rj.at("kind").get<std::string>());
      if (!attr || !kind) throw ValidationError("unknown rule attribute or kind");
      spec.attribute = *attr;
      spec.kind = *kind;
      spec.parameter = rj.at("parameter");
      cr.rules[i++] = spec;
    }
    if (i != kRuleSlotCount) throw ValidationError("missing rule slots");
    bundle.per_component.push_back(cr);
  }
  return bundle;
}

nlohmann::json puzzle_to_json(const PuzzleRecord& rec) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const auto& c : rec.context) ctx.push_back(cell_to_json(c));
  nlohmann::json dis = nlohmann::json::array();
  for (const auto& c : rec.distractors) dis.push_back(cell_to_json(c));
  return {{"puzzle_id", rec.puzzle_id},
          {"pattern", pattern_name(rec.pattern)},
          {"master_seed", rec.master_seed},
          {"split", split_name(rec.split)},
          {"answer_position", rec.answer_position},
          {"rules", bundle_to_json(rec.rules)},
          {"context", ctx},
          {"answer", cell_to_json(rec.answer)},
          {"distractors", dis}};
}

PuzzleRecord puzzle_from_json(const nlohmann::json& j) {
  PuzzleRecord rec;
  rec.puzzle_id = j.at("puzzle_id");
  auto pattern = pattern_from_name(j.at("pattern").get<std::string>());
  if (!pattern) throw ValidationError("unknown pattern id");
  rec.pattern = *pattern;
  rec.master_seed = j.at("master_seed");
  rec.split = j.at("split") == "test" ? Split::Test : Split::Train;
  rec.answer_position = j.at("answer_position");
  if (rec.answer_position < 1 || rec.answer_position > 8) {
    throw ValidationError("answer_position outside 1..8");
  }
  rec.rules = bundle_from_json(j.at("rules"));
  for (const auto& cj : j.at("context")) rec.context.push_back(cell_from_json(cj));
  if (rec.context.size() != 8) throw ValidationError("context must hold 8 cells");
  rec.answer = cell_from_json(j.at("answer"));
  for (const auto& cj : j.at("distractors")) rec.distractors.push_back(cell_from_json(cj));
  if (rec.distractors.size() != 7) throw ValidationError("distractors must hold 7 cells");
  return rec;
}

}  // namespace avrgen
