#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "avrgen/puzzle.hpp"

namespace avrgen {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 8-bit grayscale, row-major

  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

enum class Composition : std::uint8_t { ContextOnly = 0, FullQuiz, SingleCandidate };

struct RenderConfig {
  int panel_px = 160;
  int line_width_px = 2;
  std::array<std::uint8_t, 10> gray_palette = {240, 216, 192, 168, 144,
                                               120, 96,  72,  48,  24};
  Composition composition = Composition::FullQuiz;
  int margin_px = 8;
};

void validate_config(const RenderConfig& cfg);  // throws ValidationError

// Shape inscribed at fraction 0.35 + 0.1*(size-1) of the slot min-dimension,
// filled from the palette by color level, black outline. Deterministic.
Image render_panel(const Cell& cell, const RenderConfig& cfg);

struct QuizRender {
  Image image;
  nlohmann::json manifest;  // cell/candidate index -> pixel rectangle
};

// ContextOnly: completed 3x3 matrix (answer in place), 9 manifest rects.
// FullQuiz: 3x3 context with '?' placeholder plus labeled candidate strip,
// 9 + 8 manifest rects.
QuizRender render_quiz(const PuzzleRecord& record, const RenderConfig& cfg);

std::uint64_t image_digest(const Image& img);

}  // namespace avrgen

namespace avrgen::png {
std::string encode(const Image& img);
void write_file(const std::filesystem::path& path, const Image& img);
}  // namespace avrgen::png
