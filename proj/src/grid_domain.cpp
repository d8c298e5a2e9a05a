#include "nsinpaint/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "nsinpaint/error.hpp"

namespace nsinpaint {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::MaskTouchesBorder: return "MaskTouchesBorder";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SorDidNotConverge: return "SorDidNotConverge";
    case ErrorCode::NonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorCode::NonFiniteValues: return "NonFiniteValues";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::ZeroEnergy: return "ZeroEnergy";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::AllZeroImage: return "AllZeroImage";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FactorTooSmall: return "FactorTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

GrayImage::GrayImage(int height, int width, double fill)
    : height_(height),
      width_(width),
      data_(static_cast<std::size_t>(std::max(height, 0)) * std::max(width, 0), fill) {
  if (height < 0 || width < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
  }
}

GrayImage::GrayImage(int height, int width, std::vector<double> data, double scale)
    : height_(height), width_(width), data_(std::move(data)), scale_(scale) {
  if (height < 0 || width < 0 ||
      data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw Error(ErrorCode::ShapeMismatch, "pixel buffer does not match "
                                              + std::to_string(height) + "x" +
                                              std::to_string(width));
  }
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

int InpaintDomain::omega_index(int row, int col) const {
  if (row < 0 || col < 0 || row >= height_ || col >= width_) return -1;
  return omega_map_[static_cast<std::size_t>(row) * width_ + col];
}

int InpaintDomain::prime_index(int row, int col) const {
  if (row < 0 || col < 0 || row >= height_ || col >= width_) return -1;
  return prime_map_[static_cast<std::size_t>(row) * width_ + col];
}

Eigen::VectorXd InpaintDomain::lift(const Eigen::VectorXd& omega_values) const {
  if (static_cast<std::size_t>(omega_values.size()) != omega_.size()) {
    throw Error(ErrorCode::LengthMismatch, "lift expects an omega vector");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(omega_prime_.size()));
  for (std::size_t k = 0; k < omega_in_prime_.size(); ++k) {
    out[omega_in_prime_[k]] = omega_values[static_cast<Eigen::Index>(k)];
  }
  return out;
}

Eigen::VectorXd InpaintDomain::project(const Eigen::VectorXd& prime_values) const {
  if (static_cast<std::size_t>(prime_values.size()) != omega_prime_.size()) {
    throw Error(ErrorCode::LengthMismatch, "project expects an omega-prime vector");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(omega_.size()));
  for (std::size_t k = 0; k < omega_in_prime_.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = prime_values[omega_in_prime_[k]];
  }
  return out;
}

InpaintDomain extract_domain(const GrayImage& image, const Mask& mask) {
  if (image.height() != mask.height || image.width() != mask.width) {
    throw Error(ErrorCode::ShapeMismatch, "mask and image shapes differ");
  }
  return extract_domain(image.height(), image.width(), mask);
}

InpaintDomain extract_domain(int height, int width, const Mask& mask) {
  if (height != mask.height || width != mask.width ||
      mask.data.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw Error(ErrorCode::ShapeMismatch, "mask and image shapes differ");
  }

  InpaintDomain d;
  d.height_ = height;
  d.width_ = width;
  const std::size_t n = mask.data.size();
  d.omega_map_.assign(n, -1);
  d.prime_map_.assign(n, -1);

  // Column-major scan yields the natural ordering directly.
  for (int col = 0; col < width; ++col) {
    for (int row = 0; row < height; ++row) {
      if (mask.at(row, col) == 0) continue;
      if (row < kBorderMargin || col < kBorderMargin || row >= height - kBorderMargin ||
          col >= width - kBorderMargin) {
        throw Error(ErrorCode::MaskTouchesBorder,
                    "masked pixel (" + std::to_string(row) + "," + std::to_string(col) +
                        ") lies within " + std::to_string(kBorderMargin) +
                        " pixels of the image border");
      }
      d.omega_map_[static_cast<std::size_t>(row) * width + col] =
          static_cast<int>(d.omega_.size());
      d.omega_.push_back({row, col});
    }
  }
  if (d.omega_.empty()) {
    throw Error(ErrorCode::EmptyMask, "mask has no nonzero pixel");
  }

  std::vector<std::uint8_t> ring(n, 0);
  for (const Pixel& p : d.omega_) {
    for (int di = -kRingRadius; di <= kRingRadius; ++di) {
      const int reach = kRingRadius - std::abs(di);
      for (int dj = -reach; dj <= reach; ++dj) {
        ring[static_cast<std::size_t>(p.row + di) * width + (p.col + dj)] = 1;
      }
    }
  }
  for (int col = 0; col < width; ++col) {
    for (int row = 0; row < height; ++row) {
      const std::size_t flat = static_cast<std::size_t>(row) * width + col;
      if (!ring[flat]) continue;
      d.prime_map_[flat] = static_cast<int>(d.omega_prime_.size());
      d.omega_prime_.push_back({row, col});
    }
  }

  d.omega_in_prime_.reserve(d.omega_.size());
  for (const Pixel& p : d.omega_) {
    d.omega_in_prime_.push_back(d.prime_index(p.row, p.col));
  }
  return d;
}

Eigen::VectorXd restrict(const GrayImage& image, const InpaintDomain& domain, Region which) {
  if (image.height() != domain.height() || image.width() != domain.width()) {
    throw Error(ErrorCode::ShapeMismatch, "domain was extracted for a different shape");
  }
  const auto& pixels = which == Region::Omega ? domain.omega() : domain.omega_prime();
  Eigen::VectorXd out(static_cast<Eigen::Index>(pixels.size()));
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = image.at(pixels[k].row, pixels[k].col);
  }
  return out;
}

GrayImage scatter(const Eigen::VectorXd& values, const InpaintDomain& domain,
                  const GrayImage& image) {
  if (image.height() != domain.height() || image.width() != domain.width()) {
    throw Error(ErrorCode::ShapeMismatch, "domain was extracted for a different shape");
  }
  if (static_cast<std::size_t>(values.size()) != domain.omega_size()) {
    throw Error(ErrorCode::LengthMismatch, "scatter expects one value per omega pixel");
  }
  GrayImage out = image;
  const auto& pixels = domain.omega();
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    out.at(pixels[k].row, pixels[k].col) = values[static_cast<Eigen::Index>(k)];
  }
  return out;
}

void normalize_by_max(GrayImage& image) {
  double peak = 0.0;
  for (double v : image.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::NonFiniteValues, "pixel values must be finite and nonnegative");
    }
    peak = std::max(peak, v);
  }
  if (peak <= 0.0) {
    throw Error(ErrorCode::AllZeroImage, "cannot normalize an all-zero image");
  }
  for (double& v : image.data()) v /= peak;
  image.set_scale(image.scale() * peak);
}

}  // namespace nsinpaint
