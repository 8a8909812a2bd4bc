#include "avrgen/symbolic.hpp"

#include <algorithm>
#include <array>

namespace avrgen {

const char* shape_name(ShapeType s) {
  switch (s) {
    case ShapeType::Triangle: return "triangle";
    case ShapeType::Square: return "square";
    case ShapeType::Pentagon: return "pentagon";
    case ShapeType::Hexagon: return "hexagon";
    case ShapeType::Circle: return "circle";
  }
  return "?";
}

std::optional<ShapeType> shape_from_name(std::string_view name) {
  for (int i = 0; i < kShapeLevels; ++i) {
    auto s = static_cast<ShapeType>(i);
    if (name == shape_name(s)) return s;
  }
  return std::nullopt;
}

const char* layout_kind_name(LayoutKind k) {
  switch (k) {
    case LayoutKind::Single: return "single";
    case LayoutKind::Grid2x2: return "grid2x2";
    case LayoutKind::Grid3x3: return "grid3x3";
    case LayoutKind::LeftRight: return "left-right";
    case LayoutKind::UpDown: return "up-down";
    case LayoutKind::OutIn: return "out-in";
    case LayoutKind::OutInGrid: return "out-in-grid";
  }
  return "?";
}

const char* pattern_name(PatternId id) {
  switch (id) {
    case PatternId::Center: return "Center";
    case PatternId::G2: return "G-2";
    case PatternId::G3: return "G-3";
    case PatternId::LR: return "L-R";
    case PatternId::UD: return "U-D";
    case PatternId::OIC: return "O-IC";
    case PatternId::OIG: return "O-IG";
  }
  return "?";
}

std::optional<PatternId> pattern_from_name(std::string_view name) {
  for (int i = 0; i < kPatternCount; ++i) {
    auto id = static_cast<PatternId>(i);
    if (name == pattern_name(id)) return id;
  }
  return std::nullopt;
}

std::uint32_t SymbolicPanel::occupancy() const {
  std::uint32_t mask = 0;
  for (const auto& e : entities) mask |= 1u << e.slot_index;
  return mask;
}

namespace {

Layout make_grid(LayoutKind kind, int rows, int cols, int margin, int gutter, int cell,
                 int ox = 0, int oy = 0) {
  Layout lay;
  lay.kind = kind;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      lay.slots.push_back(SlotBox{ox + margin + c * (cell + gutter),
                                  oy + margin + r * (cell + gutter), cell, cell});
    }
  }
  return lay;
}

std::vector<SeedPattern> build_catalog() {
  // Slot geometry constant table (units of 1/10000; 2% gutters). Documented in
  // docs/formats.md; rendering and QA both read positions from here.
  std::vector<SeedPattern> cat;

  Layout single{LayoutKind::Single, {SlotBox{500, 500, 9000, 9000}}};
  Layout grid2 = make_grid(LayoutKind::Grid2x2, 2, 2, 400, 200, 4500);
  Layout grid3 = make_grid(LayoutKind::Grid3x3, 3, 3, 300, 200, 3000);
  Layout lr{LayoutKind::LeftRight,
            {SlotBox{300, 500, 4600, 9000}, SlotBox{5100, 500, 4600, 9000}}};
  Layout ud{LayoutKind::UpDown,
            {SlotBox{500, 300, 9000, 4600}, SlotBox{500, 5100, 9000, 4600}}};
  Layout outer{LayoutKind::OutIn, {SlotBox{500, 500, 9000, 9000}}};
  Layout inner_center{LayoutKind::Single, {SlotBox{3500, 3500, 3000, 3000}}};
  Layout inner_grid = make_grid(LayoutKind::OutInGrid, 2, 2, 0, 200, 2100, 2800, 2800);

  cat.push_back(SeedPattern{PatternId::Center, {single}});
  cat.push_back(SeedPattern{PatternId::G2, {grid2}});
  cat.push_back(SeedPattern{PatternId::G3, {grid3}});
  cat.push_back(SeedPattern{PatternId::LR, {lr}});
  cat.push_back(SeedPattern{PatternId::UD, {ud}});
  cat.push_back(SeedPattern{PatternId::OIC, {outer, inner_center}});
  cat.push_back(SeedPattern{PatternId::OIG, {outer, inner_grid}});
  return cat;
}

bool boxes_overlap(const SlotBox& a, const SlotBox& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

}  // namespace

const std::vector<SeedPattern>& seed_pattern_catalog() {
  static const std::vector<SeedPattern> catalog = build_catalog();
  return catalog;
}

const SeedPattern& seed_pattern(PatternId id) {
  return seed_pattern_catalog()[static_cast<int>(id)];
}

void validate_panel(const SymbolicPanel& panel) {
  if (panel.layout.slots.empty()) throw ValidationError("layout has no slots");
  if (panel.layout.slots.size() > 16) throw ValidationError("layout exceeds slot limit");
  for (const auto& b : panel.layout.slots) {
    if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > kGeomScale ||
        b.y + b.h > kGeomScale) {
      throw ValidationError("slot box outside unit square");
    }
  }
  for (std::size_t i = 0; i < panel.layout.slots.size(); ++i) {
    for (std::size_t j = i + 1; j < panel.layout.slots.size(); ++j) {
      if (boxes_overlap(panel.layout.slots[i], panel.layout.slots[j])) {
        throw ValidationError("slot boxes overlap");
      }
    }
  }
  if (panel.entities.empty()) throw ValidationError("occupancy has no filled slot");
  std::uint32_t seen = 0;
  for (const auto& e : panel.entities) {
    if (e.slot_index < 0 || e.slot_index >= panel.layout.capacity()) {
      throw ValidationError("slot_index outside layout");
    }
    if (seen & (1u << e.slot_index)) throw ValidationError("duplicate slot_index");
    seen |= 1u << e.slot_index;
    const auto& a = e.attrs;
    if (static_cast<int>(a.shape) < 0 || static_cast<int>(a.shape) >= kShapeLevels)
      throw ValidationError("shape_type outside range");
    if (a.size < kSizeMin || a.size > kSizeMax) throw ValidationError("size outside range");
    if (a.color < kColorMin || a.color > kColorMax)
      throw ValidationError("color outside range");
    if (a.angle < kAngleMin || a.angle > kAngleMax)
      throw ValidationError("angle outside range");
  }
}

void validate_cell(const Cell& cell) {
  if (cell.components.empty()) throw ValidationError("cell has no components");
  for (const auto& p : cell.components) validate_panel(p);
}

void canonicalize(SymbolicPanel& panel) {
  std::sort(panel.entities.begin(), panel.entities.end(),
            [](const Entity& a, const Entity& b) { return a.slot_index < b.slot_index; });
}

void canonicalize(Cell& cell) {
  for (auto& p : cell.components) canonicalize(p);
}

}  // namespace avrgen
