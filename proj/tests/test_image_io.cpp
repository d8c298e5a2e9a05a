#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "nsinpaint/error.hpp"
#include "nsinpaint/image_io.hpp"

using namespace nsinpaint;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TEST_DATA_DIR;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("nsinpaint_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(LoadImage, AsciiPgmAllWhiteIsOne) {
  TempDir dir;
  write_text(dir / "white.pgm", "P2\n3 2\n255\n255 255 255\n255 255 255\n");
  const GrayImage image = load_image(dir / "white.pgm");
  ASSERT_EQ(image.height(), 2);
  ASSERT_EQ(image.width(), 3);
  for (double v : image.data()) EXPECT_EQ(v, 1.0);
}

TEST(LoadImage, NormalizesByMaximum) {
  TempDir dir;
  write_text(dir / "three.pgm", "P2 3 1 255 0 128 255\n");
  const GrayImage image = load_image(dir / "three.pgm");
  EXPECT_EQ(image.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(image.at(0, 1), 128.0 / 255.0);
  EXPECT_EQ(image.at(0, 2), 1.0);
}

TEST(LoadImage, PngAndPgmCopiesAgree) {
  const GrayImage png = load_image(kData / "pattern.png");
  const GrayImage pgm = load_image(kData / "pattern.pgm");
  const GrayImage ascii = load_image(kData / "pattern_ascii.pgm");
  ASSERT_EQ(png.height(), 7);
  ASSERT_EQ(png.width(), 11);
  ASSERT_TRUE(png.same_shape(pgm));
  ASSERT_TRUE(png.same_shape(ascii));
  for (std::size_t k = 0; k < png.size(); ++k) {
    EXPECT_EQ(png.data()[k], pgm.data()[k]);
    EXPECT_EQ(png.data()[k], ascii.data()[k]);
  }
  const GrayImage raw = load_raw_image(kData / "pattern.pgm");
  // pattern value at (i, j) is (7i + 13j + (ij mod 5)) mod 256.
  EXPECT_EQ(raw.at(3, 4), (7 * 3 + 13 * 4 + 2) % 256);
  int peak = 0;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 11; ++j) peak = std::max(peak, (7 * i + 13 * j + (i * j) % 5) % 256);
  }
  EXPECT_EQ(png.scale(), peak);
}

TEST(LoadImage, RgbUsesLumaWeights) {
  const GrayImage raw = load_raw_image(kData / "rgb.png");
  ASSERT_EQ(raw.width(), 3);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(raw.at(1, j), 0.299 * (60 * j) + 0.587 * 100 + 0.114 * 200, 1e-12);
  }
}

TEST(LoadImage, RejectsUnsupportedInputs) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { load_image(kData / "rgba.png"); }), ErrorCode::UnsupportedFormat);
  EXPECT_EQ(code_of([&] { load_image(kData / "gray16.png"); }), ErrorCode::UnsupportedFormat);
  write_text(dir / "wide.pgm", "P2\n1 1\n65535\n300\n");
  EXPECT_EQ(code_of([&] { load_image(dir / "wide.pgm"); }), ErrorCode::UnsupportedFormat);
  write_text(dir / "junk.pgm", "hello");
  EXPECT_EQ(code_of([&] { load_image(dir / "junk.pgm"); }), ErrorCode::UnsupportedFormat);
  write_text(dir / "zero.pgm", "P2\n2 1\n255\n0 0\n");
  EXPECT_EQ(code_of([&] { load_image(dir / "zero.pgm"); }), ErrorCode::AllZeroImage);
  EXPECT_EQ(code_of([&] { load_image(dir / "missing.pgm"); }), ErrorCode::IoError);
}

TEST(SaveImage, RoundTripsThroughBothCodecs) {
  TempDir dir;
  const GrayImage original = load_image(kData / "pattern.png");
  for (const char* name : {"copy.png", "copy.pgm"}) {
    save_image(dir / name, original);
    const GrayImage raw_in = load_raw_image(kData / "pattern.pgm");
    const GrayImage raw_out = load_raw_image(dir / name);
    ASSERT_TRUE(raw_in.same_shape(raw_out));
    for (std::size_t k = 0; k < raw_in.size(); ++k) EXPECT_EQ(raw_in.data()[k], raw_out.data()[k]);
  }
}

TEST(SaveImage, DenormalizationRoundsAndClamps) {
  EXPECT_EQ(denormalize(0.5, 255.0), 128);
  EXPECT_EQ(denormalize(-0.2, 255.0), 0);
  EXPECT_EQ(denormalize(1.7, 255.0), 255);
  EXPECT_EQ(denormalize(100.0 / 172.0, 172.0), 100);
}

TEST(Mask, NonzeroMarksRegion) {
  TempDir dir;
  write_text(dir / "mask.pgm", "P2\n3 1\n255\n0 7 255\n");
  const Mask m = load_mask(dir / "mask.pgm");
  EXPECT_EQ(m.count(), 2u);
  EXPECT_EQ(m.at(0, 0), 0);
  save_mask(dir / "mask2.png", m);
  const Mask again = load_mask(dir / "mask2.png");
  EXPECT_EQ(again.data, m.data);
}

TEST(ExpandNearest, TwoByTwoBecomesFourByFour) {
  GrayImage image(2, 2, {0.1, 0.2, 0.3, 0.4});
  const Expansion e = expand_nearest(image, 2);
  ASSERT_EQ(e.image.height(), 4);
  ASSERT_EQ(e.image.width(), 4);
  EXPECT_EQ(e.mask.count(), 12u);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(e.mask.at(2 * i, 2 * j), 0);
      EXPECT_EQ(e.image.at(2 * i, 2 * j), image.at(i, j));
      EXPECT_EQ(e.image.at(2 * i + 1, 2 * j + 1), image.at(i, j));
    }
  }
  EXPECT_EQ(code_of([&] { expand_nearest(image, 1); }), ErrorCode::FactorTooSmall);
}

TEST(ExpandNearest, MaskCountForEveryFactor) {
  const GrayImage image(5, 3, 0.5);
  for (int f : {2, 3, 4}) {
    const Expansion e = expand_nearest(image, f);
    EXPECT_EQ(e.mask.count(), static_cast<std::size_t>(15 * (f * f - 1)));
    for (double v : e.image.data()) EXPECT_EQ(v, 0.5);
  }
}

TEST(Padding, ReplicateAndCrop) {
  GrayImage image(2, 3, {1, 2, 3, 4, 5, 6});
  const GrayImage padded = pad_replicate(image, 2);
  ASSERT_EQ(padded.height(), 6);
  ASSERT_EQ(padded.width(), 7);
  EXPECT_EQ(padded.at(0, 0), 1.0);
  EXPECT_EQ(padded.at(5, 6), 6.0);
  EXPECT_EQ(padded.at(0, 3), 2.0);
  const GrayImage back = crop(padded, 2, 2, 2, 3);
  for (std::size_t k = 0; k < image.size(); ++k) EXPECT_EQ(back.data()[k], image.data()[k]);

  Mask m(2, 2);
  m.at(1, 0) = 1;
  const Mask pm = pad_mask(m, 3);
  EXPECT_EQ(pm.count(), 1u);
  EXPECT_EQ(pm.at(4, 3), 1);
  EXPECT_THROW(crop(image, 1, 1, 2, 2), Error);
}

TEST(TraceCsv, RoundTripsLosslessly) {
  ConvergenceTrace trace;
  trace.records.push_back({0, 0.1, 0.2, 0.0, 0.0, 36.75, 0.0});
  trace.records.push_back({1, 1.0 / 3.0, 2.0 / 3.0, 1e-17, 0.123456789012345678, 1e300, 5.5});
  std::stringstream ss;
  write_trace_csv(ss, trace);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, kTraceHeader);
  ss.seekg(0);
  const ConvergenceTrace back = read_trace_csv(ss);
  ASSERT_EQ(back.records.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const TraceRecord& a = trace.records[i];
    const TraceRecord& b = back.records[i];
    EXPECT_EQ(a.iter, b.iter);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_EQ(a.residual2, b.residual2);
    EXPECT_EQ(a.error, b.error);
    EXPECT_EQ(a.step, b.step);
    EXPECT_EQ(a.kappa, b.kappa);
    EXPECT_EQ(a.wall_ms, b.wall_ms);
  }
  EXPECT_EQ(ss.str().find('\r'), std::string::npos);

  std::stringstream bad("iter,energy\n1,2\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(bad); }), ErrorCode::UnsupportedFormat);
}
