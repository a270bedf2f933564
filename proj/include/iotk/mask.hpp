#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace iotk {

/// Binary segmentation mask, row-major, one byte per pixel (0 or 1).
struct MaskImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  MaskImage() = default;
  MaskImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h, 0) {}

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
  std::size_t foreground() const;

  friend bool operator==(const MaskImage&, const MaskImage&) = default;
};

inline std::size_t MaskImage::foreground() const {
  std::size_t n = 0;
  for (std::uint8_t p : pixels) n += p != 0;
  return n;
}

}  // namespace iotk
