#include "nsinpaint/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <png.h>

#include "nsinpaint/error.hpp"

namespace nsinpaint {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::UnsupportedFormat, "malformed PGM header");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000L) throw Error(ErrorCode::UnsupportedFormat, "PGM value too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm(const std::vector<unsigned char>& bytes, bool ascii) {
  PgmHeaderReader reader(bytes);
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  if (width <= 0 || height <= 0) throw Error(ErrorCode::UnsupportedFormat, "empty PGM");
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::UnsupportedFormat, "only 8-bit PGM is supported");
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> data(count);
  if (ascii) {
    for (std::size_t k = 0; k < count; ++k) {
      const long v = reader.next_int();
      if (v > maxval) throw Error(ErrorCode::UnsupportedFormat, "PGM sample exceeds maxval");
      data[k] = static_cast<double>(v);
    }
  } else {
    reader.skip(1);  // single whitespace after maxval
    if (bytes.size() < reader.pos() + count) {
      throw Error(ErrorCode::IoError, "truncated PGM raster");
    }
    for (std::size_t k = 0; k < count; ++k) {
      const unsigned v = bytes[reader.pos() + k];
      if (v > static_cast<unsigned>(maxval)) {
        throw Error(ErrorCode::UnsupportedFormat, "PGM sample exceeds maxval");
      }
      data[k] = static_cast<double>(v);
    }
  }
  return GrayImage(static_cast<int>(height), static_cast<int>(width), std::move(data));
}

GrayImage decode_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(ErrorCode::UnsupportedFormat, std::string("PNG: ") + png.message);
  }
  if (png.format & (PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_ALPHA)) {
    png_image_free(&png);
    throw Error(ErrorCode::UnsupportedFormat, "only 8-bit gray or RGB PNG without alpha");
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::IoError, "PNG: " + msg);
  }
  const int height = static_cast<int>(png.height);
  const int width = static_cast<int>(png.width);
  std::vector<double> data(static_cast<std::size_t>(height) * width);
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (color) {
      data[k] = 0.299 * buffer[3 * k] + 0.587 * buffer[3 * k + 1] + 0.114 * buffer[3 * k + 2];
    } else {
      data[k] = buffer[k];
    }
  }
  return GrayImage(height, width, std::move(data));
}

bool has_png_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

void write_bytes(const std::filesystem::path& path, int height, int width,
                 const std::vector<std::uint8_t>& pixels) {
  if (has_png_extension(path)) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(width);
    png.height = static_cast<png_uint_32>(height);
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.c_str(), 0, pixels.data(), 0, nullptr)) {
      throw Error(ErrorCode::IoError, std::string("PNG write: ") + png.message);
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace

GrayImage load_raw_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return decode_pgm(bytes, bytes[1] == '2');
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string() + " is neither PGM nor PNG");
}

GrayImage load_image(const std::filesystem::path& path) {
  GrayImage image = load_raw_image(path);
  normalize_by_max(image);
  return image;
}

Mask load_mask(const std::filesystem::path& path) {
  const GrayImage raw = load_raw_image(path);
  Mask mask(raw.height(), raw.width());
  for (std::size_t k = 0; k < raw.size(); ++k) mask.data[k] = raw.data()[k] != 0.0 ? 1 : 0;
  return mask;
}

std::uint8_t denormalize(double u, double scale) {
  const double v = std::round(scale * std::clamp(u, 0.0, 1.0));
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

void save_image(const std::filesystem::path& path, const GrayImage& image) {
  std::vector<std::uint8_t> pixels(image.size());
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    pixels[k] = denormalize(image.data()[k], image.scale());
  }
  write_bytes(path, image.height(), image.width(), pixels);
}

void save_mask(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint8_t> pixels(mask.data.size());
  for (std::size_t k = 0; k < pixels.size(); ++k) pixels[k] = mask.data[k] ? 255 : 0;
  write_bytes(path, mask.height, mask.width, pixels);
}

Expansion expand_nearest(const GrayImage& image, int factor) {
  if (factor < 2) throw Error(ErrorCode::FactorTooSmall, "expansion factor must be >= 2");
  const int h = image.height() * factor;
  const int w = image.width() * factor;
  Expansion e{GrayImage(h, w), Mask(h, w)};
  e.image.set_scale(image.scale());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      e.image.at(r, c) = image.at(r / factor, c / factor);
      e.mask.at(r, c) = (r % factor == 0 && c % factor == 0) ? 0 : 1;
    }
  }
  return e;
}

GrayImage pad_replicate(const GrayImage& image, int margin) {
  if (margin < 0) throw Error(ErrorCode::InvalidArgument, "negative padding");
  GrayImage out(image.height() + 2 * margin, image.width() + 2 * margin);
  out.set_scale(image.scale());
  for (int r = 0; r < out.height(); ++r) {
    const int sr = std::clamp(r - margin, 0, image.height() - 1);
    for (int c = 0; c < out.width(); ++c) {
      out.at(r, c) = image.at(sr, std::clamp(c - margin, 0, image.width() - 1));
    }
  }
  return out;
}

Mask pad_mask(const Mask& mask, int margin) {
  Mask out(mask.height + 2 * margin, mask.width + 2 * margin);
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) out.at(r + margin, c + margin) = mask.at(r, c);
  }
  return out;
}

GrayImage crop(const GrayImage& image, int row0, int col0, int height, int width) {
  if (row0 < 0 || col0 < 0 || height < 0 || width < 0 || row0 + height > image.height() ||
      col0 + width > image.width()) {
    throw Error(ErrorCode::InvalidArgument, "crop window outside the image");
  }
  GrayImage out(height, width);
  out.set_scale(image.scale());
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) out.at(r, c) = image.at(row0 + r, col0 + c);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << kTraceHeader << '\n';
  char line[512];
  for (const TraceRecord& r : trace.records) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.energy,
                  r.residual2, r.error, r.step, r.kappa, r.wall_ms);
    out << line;
  }
}

void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_trace_csv(out, trace);
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

ConvergenceTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(ErrorCode::UnsupportedFormat, "missing trace header");
  }
  ConvergenceTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord r;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf", &r.iter, &r.energy, &r.residual2,
                    &r.error, &r.step, &r.kappa, &r.wall_ms) != 7) {
      throw Error(ErrorCode::UnsupportedFormat, "malformed trace row: " + line);
    }
    trace.records.push_back(r);
  }
  return trace;
}

ConvergenceTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace nsinpaint
