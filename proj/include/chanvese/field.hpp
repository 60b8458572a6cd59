#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chanvese/error.hpp"

namespace chanvese {

/// Dense row-major 2D grid. Index (x, y) addresses column x of row y.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(checked(width)), height_(checked(height)),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(checked(width)), height_(checked(height)), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
      throw DimensionError("grid data size does not match width*height");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::vector<T>& values() & noexcept { return data_; }
  const std::vector<T>& values() const& noexcept { return data_; }
  std::vector<T> values() && noexcept { return std::move(data_); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  static int checked(int n) {
    if (n < 0) throw DimensionError("grid dimension must be non-negative");
    return n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Sampled scalar function with physical grid spacings.
class ScalarField : public Grid<double> {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0, double dx = 1.0, double dy = 1.0);
  ScalarField(int width, int height, std::vector<double> data, double dx = 1.0,
              double dy = 1.0);

  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }

  /// Zero field with the same shape and spacing.
  ScalarField like(double fill = 0.0) const {
    return ScalarField(width(), height(), fill, dx_, dy_);
  }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  double dx_ = 1.0;
  double dy_ = 1.0;
};

/// Grayscale intensities. Raw loads hold [0,255]; normalized images hold [0,1].
class GrayImage : public Grid<double> {
 public:
  static constexpr int kMinSide = 3;

  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary segmentation; nonzero means inside the contour.
class SegmentationMask : public Grid<std::uint8_t> {
 public:
  using Grid<std::uint8_t>::Grid;

  bool inside(int x, int y) const { return (*this)(x, y) != 0; }
  std::size_t count_inside() const noexcept;

  friend bool operator==(const SegmentationMask&, const SegmentationMask&) = default;
};

/// Throws DimensionError unless both grids have the same shape.
template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": dimensions do not match");
}

}  // namespace chanvese
