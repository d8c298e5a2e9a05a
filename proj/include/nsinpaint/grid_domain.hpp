#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace nsinpaint {

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Dense row-major grid of intensities. `scale` is the factor that maps the
/// stored values back to the file's 8-bit range (the maximum pixel value at
/// load time), so that unchanged pixels survive a save/load round trip.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int height, int width, double fill = 0.0);
  GrayImage(int height, int width, std::vector<double> data, double scale = 1.0);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  double scale() const noexcept { return scale_; }
  void set_scale(double s) noexcept { scale_ = s; }

  double& at(int row, int col) { return data_[index(row, col)]; }
  double at(int row, int col) const { return data_[index(row, col)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const GrayImage& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
  double scale_ = 1.0;
};

/// Binary mask; any nonzero entry marks a pixel to be inpainted.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w, 0) {}

  std::uint8_t& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t count() const;
};

enum class Region { Omega, OmegaPrime };

/// Minimum distance (in pixels) between the inpainting region and the image
/// border. The composed third-order stencils reach two pixels, and the
/// boundary ring must itself sit inside the grid.
inline constexpr int kBorderMargin = 3;

/// Manhattan radius of the boundary ring around the inpainting region.
inline constexpr int kRingRadius = 2;

/// The inpainting region, its dilation, and the index maps between grid
/// coordinates and vector positions. Both orderings are column-major: pixels
/// are sorted by column first, then by row.
class InpaintDomain {
 public:
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  const std::vector<Pixel>& omega() const noexcept { return omega_; }
  const std::vector<Pixel>& omega_prime() const noexcept { return omega_prime_; }
  std::size_t omega_size() const noexcept { return omega_.size(); }
  std::size_t omega_prime_size() const noexcept { return omega_prime_.size(); }

  /// Position of (row, col) in the omega vector, or -1.
  int omega_index(int row, int col) const;
  /// Position of (row, col) in the omega-prime vector, or -1.
  int prime_index(int row, int col) const;

  bool in_omega(int row, int col) const { return omega_index(row, col) >= 0; }
  bool in_omega_prime(int row, int col) const { return prime_index(row, col) >= 0; }

  /// For each omega position, the matching omega-prime position.
  const std::vector<int>& omega_in_prime() const noexcept { return omega_in_prime_; }

  /// Embeds an omega vector into omega-prime, zero on the ring.
  Eigen::VectorXd lift(const Eigen::VectorXd& omega_values) const;
  /// Picks the omega entries out of an omega-prime vector.
  Eigen::VectorXd project(const Eigen::VectorXd& prime_values) const;

 private:
  friend InpaintDomain extract_domain(const GrayImage&, const Mask&);
  friend InpaintDomain extract_domain(int, int, const Mask&);

  int height_ = 0;
  int width_ = 0;
  std::vector<Pixel> omega_;
  std::vector<Pixel> omega_prime_;
  std::vector<int> omega_map_;
  std::vector<int> prime_map_;
  std::vector<int> omega_in_prime_;
};

InpaintDomain extract_domain(const GrayImage& image, const Mask& mask);
InpaintDomain extract_domain(int height, int width, const Mask& mask);

/// Returns u0 (values on omega) or u' (values on omega-prime).
Eigen::VectorXd restrict(const GrayImage& image, const InpaintDomain& domain, Region which);

/// Copy of `image` with the omega pixels replaced by `values`.
GrayImage scatter(const Eigen::VectorXd& values, const InpaintDomain& domain,
                  const GrayImage& image);

/// Normalization by the maximum pixel value; throws AllZeroImage.
void normalize_by_max(GrayImage& image);

}  // namespace nsinpaint
