#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "chanvese/field.hpp"
#include "chanvese/levelset.hpp"

namespace chanvese::testing {

template <typename Fn>
ScalarField make_field(int w, int h, Fn&& fn, double dx = 1.0, double dy = 1.0) {
  ScalarField f(w, h, 0.0, dx, dy);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f(x, y) = fn(static_cast<double>(x), static_cast<double>(y));
  return f;
}

inline GrayImage disk_image(int n, double cx, double cy, double r) {
  GrayImage img(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) img(x, y) = std::hypot(x - cx, y - cy) < r ? 1.0 : 0.0;
  return img;
}

inline SegmentationMask disk_mask(int n, double cx, double cy, double r) {
  SegmentationMask m(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) m(x, y) = std::hypot(x - cx, y - cy) < r;
  return m;
}

inline SegmentationMask random_mask(int w, int h, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  SegmentationMask m(w, h);
  for (auto& v : m.values()) v = coin(rng);
  return m;
}

/// Distance from each pixel to the nearest pixel of the opposite class,
/// signed negative inside. O(n^2) over the whole grid.
inline ScalarField brute_force_signed_distance(const SegmentationMask& m) {
  ScalarField out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const bool in = m.inside(x, y);
      double best = std::numeric_limits<double>::infinity();
      for (int v = 0; v < m.height(); ++v)
        for (int u = 0; u < m.width(); ++u)
          if (m.inside(u, v) != in) best = std::min(best, std::hypot(double(u - x), double(v - y)));
      out(x, y) = in ? -best : best;
    }
  }
  return out;
}

inline std::size_t xor_count(const SegmentationMask& a, const SegmentationMask& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a.values()[i] != 0) != (b.values()[i] != 0);
  return n;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("chanvese_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace chanvese::testing

#define CHECK_NEAR(a, b, tol) CHECK_LE(std::abs((a) - (b)), (tol))
