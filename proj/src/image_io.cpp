#include "chanvese/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace chanvese {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return bytes;
}

void write_file(const fs::path& path, const std::string& header,
                const std::vector<std::uint8_t>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// PGM

class PgmReader {
 public:
  PgmReader(const std::vector<unsigned char>& bytes, const fs::path& path)
      : bytes_(bytes), path_(path) {}

  GrayImage read() {
    const bool binary = bytes_[1] == '5';
    pos_ = 2;
    const long width = next_int("width");
    const long height = next_int("height");
    const long maxval = next_int("maxval");
    if (maxval < 1 || maxval > 255)
      throw FormatError("PGM maxval " + std::to_string(maxval) + " in '" + path_.string() +
                        "' is unsupported (only 8-bit PGM is read)");
    if (width < GrayImage::kMinSide || height < GrayImage::kMinSide)
      throw DimensionError("image '" + path_.string() + "' is " + std::to_string(width) + "x" +
                           std::to_string(height) + "; both sides must be at least 3 pixels");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> data(count);
    const double scale = 255.0 / static_cast<double>(maxval);
    if (binary) {
      ++pos_;  // single whitespace after maxval
      if (bytes_.size() < pos_ + count)
        throw FormatError("truncated P5 raster in '" + path_.string() + "'");
      for (std::size_t i = 0; i < count; ++i) data[i] = sample(bytes_[pos_ + i], maxval, scale);
    } else {
      for (std::size_t i = 0; i < count; ++i) data[i] = sample(next_int("sample"), maxval, scale);
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
  }

 private:
  double sample(long v, long maxval, double scale) const {
    if (v < 0 || v > maxval)
      throw FormatError("PGM sample " + std::to_string(v) + " exceeds maxval in '" +
                        path_.string() + "'");
    return maxval == 255 ? static_cast<double>(v) : static_cast<double>(v) * scale;
  }

  void skip_space() {
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

  long next_int(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000L) throw FormatError(std::string("PGM ") + what + " is too large");
      ++pos_;
    }
    if (pos_ == start)
      throw FormatError(std::string("malformed PGM ") + what + " in '" + path_.string() + "'");
    return v;
  }

  const std::vector<unsigned char>& bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// PNG via the libpng simplified API

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= kPngSignature.size() &&
         std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

struct PngRead {
  png_image image{};
  std::vector<unsigned char> pixels;
  int channels = 0;
};

PngRead decode_png(const std::vector<unsigned char>& bytes, const fs::path& path,
                   bool force_rgb) {
  PngRead r;
  r.image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&r.image, bytes.data(), bytes.size()))
    throw FormatError("invalid PNG '" + path.string() + "': " + r.image.message);
  if (r.image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&r.image);
    throw FormatError("16-bit PNG '" + path.string() + "' is unsupported");
  }
  const bool color = (r.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  r.image.format = (color || force_rgb) ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  r.channels = (color || force_rgb) ? 3 : 1;
  r.pixels.resize(PNG_IMAGE_SIZE(r.image));
  if (!png_image_finish_read(&r.image, nullptr, r.pixels.data(), 0, nullptr))
    throw FormatError("cannot decode PNG '" + path.string() + "': " + r.image.message);
  return r;
}

GrayImage load_png_gray(const std::vector<unsigned char>& bytes, const fs::path& path) {
  const PngRead r = decode_png(bytes, path, false);
  const int w = static_cast<int>(r.image.width);
  const int h = static_cast<int>(r.image.height);
  if (w < GrayImage::kMinSide || h < GrayImage::kMinSide)
    throw DimensionError("image '" + path.string() + "' is " + std::to_string(w) + "x" +
                         std::to_string(h) + "; both sides must be at least 3 pixels");
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (r.channels == 1) {
      data[i] = r.pixels[i];
    } else {
      const unsigned char* p = &r.pixels[3 * i];
      data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return GrayImage(w, h, std::move(data));
}

void write_png(const fs::path& path, int width, int height, png_uint_32 format,
               const std::uint8_t* pixels) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels, 0, nullptr))
    throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::string format_name(const std::vector<unsigned char>& bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7') {
    static const char* names[] = {"PBM (P1)", "PGM (P2)", "PPM (P3)", "PBM (P4)",
                                  "PGM (P5)", "PPM (P6)", "PAM (P7)"};
    return names[bytes[1] - '1'];
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff)
    return "JPEG";
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return "BMP";
  if (bytes.size() >= 4 && (std::memcmp(bytes.data(), "II*", 3) == 0 ||
                            std::memcmp(bytes.data(), "MM\0*", 4) == 0))
    return "TIFF";
  return "unknown";
}

}  // namespace

GrayImage load_image(const fs::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
    return PgmReader(bytes, path).read();
  if (is_png(bytes)) return load_png_gray(bytes, path);
  throw FormatError("unsupported image format " + format_name(bytes) + " in '" +
                    path.string() + "'");
}

GrayImage normalize(const GrayImage& img) {
  const auto values = img.data();
  if (values.empty()) throw DegenerateInputError("cannot normalize an empty image");
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) throw DegenerateInputError("cannot normalize an image whose maximum is 0");
  GrayImage out = img;
  for (double& v : out.values()) v /= peak;
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[i + radius] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width();
  const int h = img.height();

  GrayImage tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * img(std::clamp(x + i, 0, w - 1), y);
      tmp(x, y) = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * tmp(x, std::clamp(y + i, 0, h - 1));
      out(x, y) = acc;
    }
  }
  return out;
}

void save_mask(const SegmentationMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> body(mask.size());
  for (std::size_t i = 0; i < body.size(); ++i) body[i] = mask.values()[i] ? 255 : 0;
  write_file(path,
             "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n",
             body);
}

void save_pgm(const GrayImage& img, const fs::path& path) {
  std::vector<std::uint8_t> body(img.size());
  for (std::size_t i = 0; i < body.size(); ++i) body[i] = to_byte(img.values()[i]);
  write_file(path,
             "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n",
             body);
}

SegmentationMask load_mask(const fs::path& path) {
  const GrayImage img = load_image(path);
  SegmentationMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) mask.values()[i] = img.values()[i] >= 128.0;
  return mask;
}

RgbImage render_overlay(const GrayImage& img, const ContourSet& contours) {
  RgbImage out{img.width(), img.height(), {}};
  out.pixels.resize(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const std::uint8_t g = to_byte(img.values()[i]);
    out.pixels[3 * i] = out.pixels[3 * i + 1] = out.pixels[3 * i + 2] = g;
  }
  auto mark = [&](double fx, double fy) {
    const long x = std::lround(fx);
    const long y = std::lround(fy);
    if (x < 0 || y < 0 || x >= out.width || y >= out.height) return;
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * out.width + static_cast<std::size_t>(x));
    out.pixels[i] = 255;
    out.pixels[i + 1] = 0;
    out.pixels[i + 2] = 0;
  };
  for (const auto& line : contours.polylines) {
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      const Point a = line.points[i];
      mark(a.x, a.y);
      if (i == 0) continue;
      const Point b = line.points[i - 1];
      const int steps = static_cast<int>(std::ceil(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) * 2.0));
      for (int s = 1; s < steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        mark(b.x + t * (a.x - b.x), b.y + t * (a.y - b.y));
      }
    }
  }
  return out;
}

void save_overlay(const GrayImage& img, const ContourSet& contours, const fs::path& path) {
  save_png(render_overlay(img, contours), path);
}

void save_png(const RgbImage& img, const fs::path& path) {
  write_png(path, img.width, img.height, PNG_FORMAT_RGB, img.pixels.data());
}

void save_png(const GrayImage& img, const fs::path& path) {
  std::vector<std::uint8_t> bytes(img.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(img.values()[i]);
  write_png(path, img.width(), img.height(), PNG_FORMAT_GRAY, bytes.data());
}

RgbImage load_png_rgb(const fs::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (!is_png(bytes)) throw FormatError("'" + path.string() + "' is not a PNG file");
  PngRead r = decode_png(bytes, path, true);
  return RgbImage{static_cast<int>(r.image.width), static_cast<int>(r.image.height),
                  std::move(r.pixels)};
}

}  // namespace chanvese
