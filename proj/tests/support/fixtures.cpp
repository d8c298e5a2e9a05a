#include "fixtures.hpp"

#include <cmath>

namespace fixture {

Mask block_mask(int height, int width, int row0, int col0, int n) {
  Mask m(height, width);
  for (int r = row0; r < row0 + n; ++r) {
    for (int c = col0; c < col0 + n; ++c) m.at(r, c) = 1;
  }
  return m;
}

Problem stripe() {
  constexpr int kSize = 64;
  GrayImage image(kSize, kSize);
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      // Signed distance to the line row = col (scaled), stripe half-width 6.
      const double d = std::abs(static_cast<double>(r - c)) / std::sqrt(2.0);
      image.at(r, c) = d <= 6.0 ? 1.0 : 0.4;
    }
  }
  return {image, block_mask(kSize, kSize, 24, 24, 16)};
}

Problem linear_ramp(int size, int hole, double a, double b, double c) {
  GrayImage image(size, size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) image.at(r, col) = a * r + b * col + c;
  }
  const int start = (size - hole) / 2;
  return {image, block_mask(size, size, start, start, hole)};
}

GrayImage checker8() {
  GrayImage image(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) image.at(r, c) = ((r / 2 + c / 2) % 2 == 0) ? 1.0 : 0.25;
  }
  return image;
}

Mask random_mask(int height, int width, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Mask m(height, width);
  std::size_t set = 0;
  const int margin = nsinpaint::kBorderMargin;
  for (int r = margin; r < height - margin; ++r) {
    for (int c = margin; c < width - margin; ++c) {
      if (coin(rng) < density) {
        m.at(r, c) = 1;
        ++set;
      }
    }
  }
  if (set == 0) m.at(height / 2, width / 2) = 1;
  return m;
}

GrayImage random_image(int height, int width, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GrayImage image(height, width);
  for (double& v : image.data()) v = dist(rng);
  return image;
}

}  // namespace fixture
