#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "chanvese/field.hpp"
#include "chanvese/levelset.hpp"

namespace chanvese {

/// 8-bit interleaved RGB raster, as written by save_overlay().
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // r,g,b per pixel, row-major

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Reads PGM (P2/P5, maxval <= 255) or 8-bit PNG (gray, gray+alpha, RGB,
/// RGBA, palette). Color is reduced with luma weights 0.299/0.587/0.114.
/// Samples are returned on the [0,255] scale.
GrayImage load_image(const std::filesystem::path& path);

/// Divides every sample by the image maximum.
GrayImage normalize(const GrayImage& img);

/// Separable Gaussian blur; kernel radius ceil(4 sigma), weights summing to 1,
/// edge-replicated borders.
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

/// Normalized 1D Gaussian kernel of length 2*ceil(4 sigma) + 1.
std::vector<double> gaussian_kernel(double sigma);

/// Binary P5 PGM with inside = 255, outside = 0.
void save_mask(const SegmentationMask& mask, const std::filesystem::path& path);

/// Any image load_image() accepts; samples >= 128 are inside.
SegmentationMask load_mask(const std::filesystem::path& path);

/// Grayscale image (expected in [0,1]) expanded to RGB with the contour
/// rasterized in pure red.
RgbImage render_overlay(const GrayImage& img, const ContourSet& contours);

/// render_overlay() written as an 8-bit RGB PNG.
void save_overlay(const GrayImage& img, const ContourSet& contours,
                  const std::filesystem::path& path);

void save_png(const RgbImage& img, const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);
RgbImage load_png_rgb(const std::filesystem::path& path);

/// Binary P5 PGM of an image in [0,1] (values scaled by 255 and rounded).
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace chanvese
