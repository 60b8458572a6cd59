#include "chanvese/field.hpp"

#include <algorithm>
#include <cmath>

namespace chanvese {

namespace {

void check_spacing(double dx, double dy) {
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw ParameterError("grid spacings must be positive and finite");
}

void check_image_dims(int width, int height) {
  if (width < GrayImage::kMinSide || height < GrayImage::kMinSide)
    throw DimensionError("image is " + std::to_string(width) + "x" + std::to_string(height) +
                         "; both sides must be at least 3 pixels");
}

}  // namespace

ScalarField::ScalarField(int width, int height, double fill, double dx, double dy)
    : Grid<double>(width, height, fill), dx_(dx), dy_(dy) {
  check_spacing(dx, dy);
}

ScalarField::ScalarField(int width, int height, std::vector<double> data, double dx, double dy)
    : Grid<double>(width, height, std::move(data)), dx_(dx), dy_(dy) {
  check_spacing(dx, dy);
}

GrayImage::GrayImage(int width, int height, double fill) : Grid<double>(width, height, fill) {
  check_image_dims(width, height);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : Grid<double>(width, height, std::move(data)) {
  check_image_dims(width, height);
}

std::size_t SegmentationMask::count_inside() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(data().begin(), data().end(), [](std::uint8_t v) { return v != 0; }));
}

}  // namespace chanvese
