#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx {

/// Greyscale image in row-major order, values 0..255, plus an optional
/// ground-truth label and a dataset-unique id.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, width*height entries
  std::optional<uint8_t> label;
  std::string id;

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h, 0) {}
  Image(int w, int h, std::vector<uint8_t> px) : width(w), height(h), pixels(std::move(px)) {
    if (pixels.size() != static_cast<size_t>(w) * h)
      throw DimensionError("Image: pixel buffer does not match " + std::to_string(w) + "x" +
                           std::to_string(h) + " geometry");
  }

  size_t pixel_count() const { return pixels.size(); }

  uint8_t at(int row, int col) const { return pixels[static_cast<size_t>(row) * width + col]; }
  uint8_t& at(int row, int col) { return pixels[static_cast<size_t>(row) * width + col]; }

  bool same_geometry(int w, int h) const { return width == w && height == h; }
};

}  // namespace hdx
