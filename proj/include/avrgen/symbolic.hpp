#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avrgen {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& invariant)
      : std::runtime_error(invariant) {}
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

enum class ShapeType : std::uint8_t { Triangle = 0, Square, Pentagon, Hexagon, Circle };

constexpr int kShapeLevels = 5;
constexpr int kSizeMin = 1;
constexpr int kSizeMax = 6;
constexpr int kColorMin = 0;
constexpr int kColorMax = 9;
constexpr int kAngleMin = 0;
constexpr int kAngleMax = 7;

const char* shape_name(ShapeType s);
std::optional<ShapeType> shape_from_name(std::string_view name);

struct AttributeValue {
  ShapeType shape = ShapeType::Triangle;
  int size = kSizeMin;
  int color = kColorMin;
  int angle = 0;  // carried in the schema but always 0; no rule may touch it
  bool operator==(const AttributeValue&) const = default;
};

struct Entity {
  int slot_index = 0;
  AttributeValue attrs;
  bool operator==(const Entity&) const = default;
};

// Normalized box in fixed-point units of 1/10000 of the panel side, so that
// geometry survives serialization bit-exactly.
constexpr int kGeomScale = 10000;

struct SlotBox {
  int x = 0, y = 0, w = 0, h = 0;
  bool operator==(const SlotBox&) const = default;
};

enum class LayoutKind : std::uint8_t {
  Single = 0,
  Grid2x2,
  Grid3x3,
  LeftRight,
  UpDown,
  OutIn,
  OutInGrid,
};

const char* layout_kind_name(LayoutKind k);

struct Layout {
  LayoutKind kind = LayoutKind::Single;
  std::vector<SlotBox> slots;
  int capacity() const { return static_cast<int>(slots.size()); }
  bool operator==(const Layout&) const = default;
};

// One component region of a matrix cell: a layout plus its entities.
struct SymbolicPanel {
  Layout layout;
  std::vector<Entity> entities;  // canonical form keeps these sorted by slot_index

  int number() const { return static_cast<int>(entities.size()); }
  std::uint32_t occupancy() const;
  bool operator==(const SymbolicPanel&) const = default;
};

// A full matrix cell; two-component seed patterns (O-IC, O-IG) stack an outer
// and an inner panel.
struct Cell {
  std::vector<SymbolicPanel> components;
  bool operator==(const Cell&) const = default;
};

enum class PatternId : std::uint8_t { Center = 0, G2, G3, LR, UD, OIC, OIG };

constexpr int kPatternCount = 7;

const char* pattern_name(PatternId id);
std::optional<PatternId> pattern_from_name(std::string_view name);

struct SeedPattern {
  PatternId id = PatternId::Center;
  std::vector<Layout> components;
};

// The seven seed patterns in fixed table order: Center, G-2, G-3, L-R, U-D,
// O-IC, O-IG.
const std::vector<SeedPattern>& seed_pattern_catalog();
const SeedPattern& seed_pattern(PatternId id);

// Throws ValidationError naming the violated invariant.
void validate_panel(const SymbolicPanel& panel);
void validate_cell(const Cell& cell);

// Sorts entities by slot_index (the canonical form).
void canonicalize(SymbolicPanel& panel);
void canonicalize(Cell& cell);

}  // namespace avrgen
