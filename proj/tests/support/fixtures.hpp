#pragma once

#include <cstdint>
#include <random>

#include "nsinpaint/grid_domain.hpp"

namespace fixture {

using nsinpaint::GrayImage;
using nsinpaint::Mask;

struct Problem {
  GrayImage image;
  Mask mask;
};

/// 64x64 image: a diagonal bright stripe (1.0) on a darker background
/// (0.4), with a 16x16 hole in the middle crossing the stripe.
Problem stripe();

/// u = a*row + b*col + c on a size x size grid with a centred square hole.
Problem linear_ramp(int size, int hole, double a, double b, double c);

/// 8x8 checkerboard of 2x2 cells with values 0.25 and 1.0.
GrayImage checker8();

/// Square block mask [row0, row0+n) x [col0, col0+n).
Mask block_mask(int height, int width, int row0, int col0, int n);

/// Random mask on a height x width grid that respects the border margin,
/// with roughly `density` of the admissible pixels set (at least one).
Mask random_mask(int height, int width, double density, std::mt19937_64& rng);

/// Uniform random intensities in [lo, hi].
GrayImage random_image(int height, int width, std::mt19937_64& rng, double lo = 0.0,
                       double hi = 1.0);

}  // namespace fixture
