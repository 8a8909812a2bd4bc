#include "avrgen/render.hpp"

#include <algorithm>
#include <cmath>

#include "avrgen/rng.hpp"

namespace avrgen {

namespace {

constexpr std::uint8_t kBackground = 255;
constexpr std::uint8_t kInk = 0;

struct Pt {
  double x, y;
};

void fill_rect(Image& img, int x, int y, int w, int h, std::uint8_t v) {
  for (int yy = std::max(0, y); yy < std::min(img.height, y + h); ++yy) {
    for (int xx = std::max(0, x); xx < std::min(img.width, x + w); ++xx) {
      img.at(xx, yy) = v;
    }
  }
}

void blit(Image& dst, const Image& src, int x, int y) {
  for (int yy = 0; yy < src.height; ++yy) {
    for (int xx = 0; xx < src.width; ++xx) {
      dst.at(x + xx, y + yy) = src.at(xx, yy);
    }
  }
}

std::vector<Pt> polygon_vertices(int sides, double cx, double cy, double radius) {
  std::vector<Pt> pts;
  const double start = -M_PI / 2.0 + (sides == 4 ? M_PI / 4.0 : 0.0);
  for (int i = 0; i < sides; ++i) {
    double a = start + 2.0 * M_PI * i / sides;
    pts.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
  }
  return pts;
}

void fill_polygon(Image& img, const std::vector<Pt>& pts, std::uint8_t v) {
  double ymin = pts[0].y, ymax = pts[0].y;
  for (const auto& p : pts) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  for (int y = std::max(0, static_cast<int>(std::floor(ymin)));
       y <= std::min(img.height - 1, static_cast<int>(std::ceil(ymax))); ++y) {
    const double yc = y + 0.5;
    std::vector<double> xs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Pt& a = pts[i];
      const Pt& b = pts[(i + 1) % pts.size()];
      if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc)) {
        xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      int x0 = std::max(0, static_cast<int>(std::ceil(xs[i] - 0.5)));
      int x1 = std::min(img.width - 1, static_cast<int>(std::floor(xs[i + 1] - 0.5)));
      for (int x = x0; x <= x1; ++x) img.at(x, y) = v;
    }
  }
}

void stamp(Image& img, double x, double y, int brush, std::uint8_t v) {
  int half = brush / 2;
  int cx = static_cast<int>(std::lround(x));
  int cy = static_cast<int>(std::lround(y));
  fill_rect(img, cx - half, cy - half, brush, brush, v);
}

void stroke_polygon(Image& img, const std::vector<Pt>& pts, int width, std::uint8_t v) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Pt& a = pts[i];
    const Pt& b = pts[(i + 1) % pts.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, static_cast<int>(len * 4));
    for (int s = 0; s <= steps; ++s) {
      double t = static_cast<double>(s) / steps;
      stamp(img, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), width, v);
    }
  }
}

void draw_circle(Image& img, double cx, double cy, double radius, int width,
                 std::uint8_t fill, std::uint8_t stroke) {
  const double r2 = radius * radius;
  const double inner = std::max(0.0, radius - width);
  const double inner2 = inner * inner;
  for (int y = std::max(0, static_cast<int>(cy - radius - 1));
       y <= std::min(img.height - 1, static_cast<int>(cy + radius + 1)); ++y) {
    for (int x = std::max(0, static_cast<int>(cx - radius - 1));
         x <= std::min(img.width - 1, static_cast<int>(cx + radius + 1)); ++x) {
      double d2 = (x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy);
      if (d2 <= inner2) {
        img.at(x, y) = fill;
      } else if (d2 <= r2) {
        img.at(x, y) = stroke;
      }
    }
  }
}

// 5x7 glyphs for candidate labels and the missing-cell placeholder.
const std::uint8_t* glyph_rows(char c) {
  static const std::uint8_t digits[10][7] = {
      {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
      {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1E, 0x01, 0x01, 0x0E, 0x01, 0x01, 0x1E},
      {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
      {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
      {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}};
  static const std::uint8_t qmark[7] = {0x0E, 0x11, 0x01, 0x06, 0x04, 0x00, 0x04};
  if (c >= '0' && c <= '9') return digits[c - '0'];
  return qmark;
}

void draw_glyph(Image& img, char c, int x, int y, int scale, std::uint8_t v) {
  const std::uint8_t* rows = glyph_rows(c);
  for (int r = 0; r < 7; ++r) {
    for (int col = 0; col < 5; ++col) {
      if (rows[r] & (1 << (4 - col))) {
        fill_rect(img, x + col * scale, y + r * scale, scale, scale, v);
      }
    }
  }
}

double size_fraction(int level) { return 0.35 + 0.1 * (level - 1); }

void draw_entity(Image& img, const Entity& e, const SlotBox& slot, const RenderConfig& cfg) {
  const double scale = static_cast<double>(cfg.panel_px) / kGeomScale;
  const double sx = slot.x * scale, sy = slot.y * scale;
  const double sw = slot.w * scale, sh = slot.h * scale;
  const double cx = sx + sw / 2.0, cy = sy + sh / 2.0;
  const double radius = size_fraction(e.attrs.size) * std::min(sw, sh) / 2.0;
  const std::uint8_t fill = cfg.gray_palette[e.attrs.color];

  if (e.attrs.shape == ShapeType::Circle) {
    draw_circle(img, cx, cy, radius, cfg.line_width_px, fill, kInk);
    return;
  }
  int sides = 3;
  switch (e.attrs.shape) {
    case ShapeType::Triangle: sides = 3; break;
    case ShapeType::Square: sides = 4; break;
    case ShapeType::Pentagon: sides = 5; break;
    case ShapeType::Hexagon: sides = 6; break;
    default: break;
  }
  auto pts = polygon_vertices(sides, cx, cy, radius);
  fill_polygon(img, pts, fill);
  stroke_polygon(img, pts, cfg.line_width_px, kInk);
}

void draw_panel_border(Image& img, const RenderConfig& cfg) {
  const int lw = std::max(1, cfg.line_width_px / 2);
  fill_rect(img, 0, 0, img.width, lw, kInk);
  fill_rect(img, 0, img.height - lw, img.width, lw, kInk);
  fill_rect(img, 0, 0, lw, img.height, kInk);
  fill_rect(img, img.width - lw, 0, lw, img.height, kInk);
}

Image blank_panel(const RenderConfig& cfg) {
  Image img;
  img.width = img.height = cfg.panel_px;
  img.pixels.assign(static_cast<std::size_t>(cfg.panel_px) * cfg.panel_px, kBackground);
  draw_panel_border(img, cfg);
  return img;
}

nlohmann::json rect_json(int index, int x, int y, int w, int h) {
  return {{"index", index}, {"x", x}, {"y", y}, {"w", w}, {"h", h}};
}

}  // namespace

void validate_config(const RenderConfig& cfg) {
  if (cfg.panel_px < 64) throw ValidationError("panel_px below minimum 64");
  for (std::size_t i = 1; i < cfg.gray_palette.size(); ++i) {
    if (cfg.gray_palette[i] >= cfg.gray_palette[i - 1]) {
      throw ValidationError("gray_palette not strictly monotonic");
    }
  }
  if (cfg.line_width_px < 1) throw ValidationError("line_width_px below 1");
}

Image render_panel(const Cell& cell, const RenderConfig& cfg) {
  validate_config(cfg);
  Image img = blank_panel(cfg);
  for (const auto& comp : cell.components) {
    for (const auto& e : comp.entities) {
      draw_entity(img, e, comp.layout.slots[e.slot_index], cfg);
    }
  }
  return img;
}

QuizRender render_quiz(const PuzzleRecord& record, const RenderConfig& cfg) {
  validate_config(cfg);
  QuizRender out;
  const int P = cfg.panel_px;
  const int m = cfg.margin_px;
  const int gap = cfg.margin_px;

  if (cfg.composition == Composition::SingleCandidate) {
    out.image = render_panel(record.answer, cfg);
    out.manifest = {{"composition", "single_candidate"},
                    {"panel_px", P},
                    {"cells", nlohmann::json::array({rect_json(0, 0, 0, P, P)})}};
    return out;
  }

  const bool full = cfg.composition == Composition::FullQuiz;
  const int grid_w = 3 * P + 2 * gap;
  const int label_h = full ? 18 : 0;
  const int strip_h = full ? 2 * (label_h + P) + gap : 0;
  const int W = full ? std::max(grid_w, 4 * P + 3 * gap) + 2 * m : grid_w + 2 * m;
  const int grid_x = (W - grid_w) / 2;
  const int H = m + grid_w /* grid is square */ + (full ? m + strip_h : 0) + m;

  out.image.width = W;
  out.image.height = H;
  out.image.pixels.assign(static_cast<std::size_t>(W) * H, kBackground);

  nlohmann::json cells = nlohmann::json::array();
  for (int idx = 0; idx < 9; ++idx) {
    const int r = idx / 3, c = idx % 3;
    const int x = grid_x + c * (P + gap);
    const int y = m + r * (P + gap);
    if (idx < 8) {
      blit(out.image, render_panel(record.context[idx], cfg), x, y);
    } else if (!full) {
      blit(out.image, render_panel(record.answer, cfg), x, y);
    } else {
      Image ph = blank_panel(cfg);
      const int qs = std::max(2, P / 14);
      draw_glyph(ph, '?', (P - 5 * qs) / 2, (P - 7 * qs) / 2, qs, kInk);
      blit(out.image, ph, x, y);
    }
    cells.push_back(rect_json(idx, x, y, P, P));
  }
  out.manifest = {{"composition", full ? "full_quiz" : "context_only"},
                  {"panel_px", P},
                  {"cells", cells}};

  if (full) {
    const auto candidates = record.candidates();
    nlohmann::json cand_rects = nlohmann::json::array();
    const int strip_y = m + grid_w + m;
    const int strip_x = (W - (4 * P + 3 * gap)) / 2;
    for (int i = 0; i < 8; ++i) {
      const int r = i / 4, c = i % 4;
      const int x = strip_x + c * (P + gap);
      const int y = strip_y + r * (label_h + P + gap) + label_h;
      draw_glyph(out.image, static_cast<char>('1' + i), x + P / 2 - 5, y - label_h + 2, 2,
                 kInk);
      blit(out.image, render_panel(candidates[i], cfg), x, y);
      cand_rects.push_back(rect_json(i + 1, x, y, P, P));
    }
    out.manifest["candidates"] = cand_rects;
  }
  return out;
}

std::uint64_t image_digest(const Image& img) {
  std::string header = std::to_string(img.width) + "x" + std::to_string(img.height) + ":";
  std::uint64_t h = fnv1a64(header);
  for (std::uint8_t p : img.pixels) {
    h ^= p;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace avrgen
