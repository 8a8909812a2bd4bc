#include <set>

#include "doctest.h"

#include "avrgen/puzzle.hpp"
#include "avrgen/render.hpp"

using namespace avrgen;

namespace {

Image crop(const Image& img, int x, int y, int w, int h) {
  Image out;
  out.width = w;
  out.height = h;
  out.pixels.resize(static_cast<std::size_t>(w) * h);
  for (int yy = 0; yy < h; ++yy) {
    for (int xx = 0; xx < w; ++xx) out.at(xx, yy) = img.at(x + xx, y + yy);
  }
  return out;
}

Cell single_entity_cell(ShapeType shape, int size, int color) {
  Cell cell;
  SymbolicPanel p;
  p.layout = seed_pattern(PatternId::Center).components[0];
  p.entities.push_back(Entity{0, AttributeValue{shape, size, color, 0}});
  cell.components.push_back(std::move(p));
  return cell;
}

}  // namespace

TEST_CASE("render config validation") {
  RenderConfig cfg;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.panel_px = 32;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.panel_px = 160;
  cfg.gray_palette[3] = cfg.gray_palette[2];
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("render_panel is deterministic") {
  const PuzzleRecord rec = generate_puzzle(PatternId::OIG, 8, Split::Train);
  RenderConfig cfg;
  const Image a = render_panel(rec.answer, cfg);
  const Image b = render_panel(rec.answer, cfg);
  CHECK(a.pixels == b.pixels);
  CHECK(image_digest(a) == image_digest(b));
}

TEST_CASE("distinct color levels map to distinct interior grays") {
  RenderConfig cfg;
  std::set<std::uint64_t> digests;
  for (int color = 0; color <= 9; ++color) {
    const Image img = render_panel(single_entity_cell(ShapeType::Square, 4, color), cfg);
    // Sample the shape interior at the panel center.
    const std::uint8_t center = img.at(cfg.panel_px / 2, cfg.panel_px / 2);
    CHECK(center == cfg.gray_palette[color]);
    CHECK(digests.insert(image_digest(img)).second);
  }
}

TEST_CASE("larger size levels occupy strictly wider pixel extents") {
  RenderConfig cfg;
  int prev = 0;
  for (int size = kSizeMin; size <= kSizeMax; ++size) {
    const Image img = render_panel(single_entity_cell(ShapeType::Circle, size, 5), cfg);
    // Measure the circle's horizontal extent along the center scanline.
    int minx = img.width, maxx = -1;
    const int y = cfg.panel_px / 2;
    for (int x = 2; x < img.width - 2; ++x) {  // skip the border
      if (img.at(x, y) != 255) {
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
      }
    }
    const int extent = maxx - minx;
    CHECK(extent > prev);
    prev = extent;
  }
}

TEST_CASE("shape ink stays inside its slot box") {
  RenderConfig cfg;
  const PuzzleRecord rec = generate_puzzle(PatternId::G3, 44, Split::Train);
  const Cell& cell = rec.answer;
  const Image img = render_panel(cell, cfg);
  const double scale = static_cast<double>(cfg.panel_px) / kGeomScale;

  // Ink centroid of each occupied slot must sit inside that slot's box.
  for (const auto& e : cell.components[0].entities) {
    const SlotBox& b = cell.components[0].layout.slots[e.slot_index];
    const int x0 = static_cast<int>(b.x * scale), y0 = static_cast<int>(b.y * scale);
    const int x1 = static_cast<int>((b.x + b.w) * scale);
    const int y1 = static_cast<int>((b.y + b.h) * scale);
    double sx = 0, sy = 0;
    long long n = 0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        if (img.at(x, y) != 255) {
          sx += x;
          sy += y;
          ++n;
        }
      }
    }
    REQUIRE(n > 0);  // the slot is not empty
    const double cx = sx / n, cy = sy / n;
    CHECK(cx > x0);
    CHECK(cx < x1);
    CHECK(cy > y0);
    CHECK(cy < y1);
  }
}

TEST_CASE("full quiz manifest exposes 9 cell rects and 8 candidate rects") {
  const PuzzleRecord rec = generate_puzzle(PatternId::G2, 11, Split::Train);
  RenderConfig cfg;
  cfg.composition = Composition::FullQuiz;
  const QuizRender quiz = render_quiz(rec, cfg);
  REQUIRE(quiz.manifest.at("cells").size() == 9);
  REQUIRE(quiz.manifest.at("candidates").size() == 8);
  CHECK(quiz.manifest.at("composition") == "full_quiz");

  // Crop-compare: each manifest rect must equal the standalone panel render.
  const auto candidates = rec.candidates();
  for (const auto& r : quiz.manifest.at("candidates")) {
    const int i = r.at("index").get<int>() - 1;
    const Image cropped = crop(quiz.image, r.at("x"), r.at("y"), r.at("w"), r.at("h"));
    const Image direct = render_panel(candidates[i], cfg);
    CHECK(cropped.pixels == direct.pixels);
  }
  for (const auto& r : quiz.manifest.at("cells")) {
    const int i = r.at("index").get<int>();
    if (i == 8) continue;  // placeholder cell
    const Image cropped = crop(quiz.image, r.at("x"), r.at("y"), r.at("w"), r.at("h"));
    const Image direct = render_panel(rec.context[i], cfg);
    CHECK(cropped.pixels == direct.pixels);
  }
}

TEST_CASE("context-only composition shows the completed matrix") {
  const PuzzleRecord rec = generate_puzzle(PatternId::UD, 13, Split::Train);
  RenderConfig cfg;
  cfg.composition = Composition::ContextOnly;
  const QuizRender quiz = render_quiz(rec, cfg);
  REQUIRE(quiz.manifest.at("cells").size() == 9);
  CHECK_FALSE(quiz.manifest.contains("candidates"));

  const auto& last = quiz.manifest.at("cells")[8];
  const Image cropped =
      crop(quiz.image, last.at("x"), last.at("y"), last.at("w"), last.at("h"));
  const Image direct = render_panel(rec.answer, cfg);
  CHECK(cropped.pixels == direct.pixels);  // answer rendered in place
}

TEST_CASE("quiz rendering is deterministic across calls") {
  const PuzzleRecord rec = generate_puzzle(PatternId::OIC, 21, Split::Train);
  RenderConfig cfg;
  cfg.composition = Composition::FullQuiz;
  const QuizRender a = render_quiz(rec, cfg);
  const QuizRender b = render_quiz(rec, cfg);
  CHECK(a.image.pixels == b.image.pixels);
  CHECK(a.manifest == b.manifest);
}

TEST_CASE("png encoding carries the PNG signature and is deterministic") {
  const PuzzleRecord rec = generate_puzzle(PatternId::Center, 2, Split::Train);
  const Image img = render_panel(rec.answer, RenderConfig{});
  const std::string a = png::encode(img);
  const std::string b = png::encode(img);
  CHECK(a == b);
  REQUIRE(a.size() > 8);
  const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  for (int i = 0; i < 8; ++i) CHECK(static_cast<unsigned char>(a[i]) == sig[i]);
  CHECK(a.find("IHDR") != std::string::npos);
  CHECK(a.find("IEND") != std::string::npos);
}
