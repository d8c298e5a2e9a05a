#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nsinpaint/flow_solver.hpp"
#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

/// Reads an 8-bit PGM (P2/P5) or PNG (gray or RGB) without normalization;
/// values are in 0..255. RGB is reduced with luma weights 0.299/0.587/0.114.
GrayImage load_raw_image(const std::filesystem::path& path);

/// load_raw_image followed by division by the maximum pixel value.
GrayImage load_image(const std::filesystem::path& path);

/// Any nonzero pixel marks the inpainting region.
Mask load_mask(const std::filesystem::path& path);

/// Writes round(scale * clamp(u, 0, 1)) as 8 bits. The format follows the
/// extension: ".png" gives PNG, anything else binary PGM (P5).
void save_image(const std::filesystem::path& path, const GrayImage& image);
void save_mask(const std::filesystem::path& path, const Mask& mask);

/// 8-bit value that save_image would write for normalized value u.
std::uint8_t denormalize(double u, double scale);

struct Expansion {
  GrayImage image;
  Mask mask;
};

/// Nearest-neighbour enlargement by an integer factor. Source pixel (i, j)
/// lands on (i*factor, j*factor); every other pixel is marked in the mask.
Expansion expand_nearest(const GrayImage& image, int factor);

/// Edge-replicating padding by `margin` pixels on each side.
GrayImage pad_replicate(const GrayImage& image, int margin);
Mask pad_mask(const Mask& mask, int margin);
GrayImage crop(const GrayImage& image, int row0, int col0, int height, int width);

inline constexpr const char* kTraceHeader = "iter,energy,residual2,error,step,kappa,wall_ms";

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace);
ConvergenceTrace read_trace_csv(std::istream& in);
ConvergenceTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace nsinpaint
