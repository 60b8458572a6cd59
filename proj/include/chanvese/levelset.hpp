#pragma once

#include <vector>

#include "chanvese/field.hpp"
#include "chanvese/grid.hpp"

namespace chanvese {

/// Implicit contour: the zero level set of a scalar field, negative inside.
class LevelSetField {
 public:
  LevelSetField() = default;
  explicit LevelSetField(ScalarField field);

  const ScalarField& field() const noexcept { return field_; }
  ScalarField& field() noexcept { return field_; }

  int width() const noexcept { return field_.width(); }
  int height() const noexcept { return field_.height(); }
  double operator()(int x, int y) const { return field_(x, y); }
  double& operator()(int x, int y) { return field_(x, y); }

  bool inside(int x, int y) const { return field_(x, y) < 0.0; }

  /// Pixels with phi < 0. Zero-valued pixels count as outside.
  SegmentationMask mask() const;

  friend bool operator==(const LevelSetField&, const LevelSetField&) = default;

 private:
  ScalarField field_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Polyline {
  std::vector<Point> points;
  /// When closed, the last point repeats the first.
  bool closed = false;
};

struct ContourSet {
  std::vector<Polyline> polylines;

  bool empty() const noexcept { return polylines.empty(); }
  /// Total arc length in physical units (pixel coordinates scaled by dx, dy).
  double length(double dx = 1.0, double dy = 1.0) const;
};

/// Default guard for the squared gradient magnitude in curvature().
inline constexpr double kCurvatureEps = 1e-8;

/// K = -div(grad(phi) / |grad(phi)|) from central differences, with the
/// squared gradient magnitude clamped below at `eps`. A circle's level sets
/// have K = -1/radius under this convention.
ScalarField curvature(const LevelSetField& phi, double eps = kCurvatureEps,
                      BoundaryMode mode = BoundaryMode::Replicate);

/// Curvature at a single pixel; curvature() evaluates this everywhere.
double curvature_at(const ScalarField& phi, int x, int y, double eps, BoundaryMode mode);

/// Upwind approximation of |grad(phi)| for a term a*|grad(phi)| with sign(a) = coeff_sign.
///   +1: sqrt(max(Dx+,0)^2 + min(Dx-,0)^2 + max(Dy+,0)^2 + min(Dy-,0)^2)
///   -1: sqrt(min(Dx+,0)^2 + max(Dx-,0)^2 + min(Dy+,0)^2 + max(Dy-,0)^2)
ScalarField upwind_norm(const LevelSetField& phi, int coeff_sign,
                        BoundaryMode mode = BoundaryMode::Replicate);

/// Same branch selection, applied to precomputed one-sided differences.
double upwind_norm_at(const OneSidedDiffs& d, int x, int y, int coeff_sign);

/// Analytic signed distance to a circle, negative inside.
LevelSetField sdf_circle(int width, int height, double cx, double cy, double r);

/// Signed distance from a binary mask via an exact Euclidean distance
/// transform. Each pixel's distance to the nearest pixel of the opposite
/// class is shifted by half a pixel so the zero crossing sits between the
/// two classes. Thresholding the result at zero reproduces the mask.
LevelSetField sdf_from_mask(const SegmentationMask& mask);

/// Squared Euclidean distance from every pixel to the nearest pixel where
/// `feature` is nonzero (lower-envelope-of-parabolas algorithm, exact).
/// Pixels with no feature anywhere receive +infinity.
std::vector<double> squared_distance_transform(const SegmentationMask& feature);

/// Restores the signed-distance property by evolving
///   phi_t = S(phi0) (1 - |grad(phi)|),  S(p) = p / sqrt(p^2 + h^2),
/// with h = min(dx, dy). |grad(phi)| uses the upwind branch selection of
/// upwind_norm() on second-order ENO differences. Pixels adjacent to the
/// zero crossing are instead relaxed towards their initial distance to the
/// interface, which keeps the zero crossing in place.
LevelSetField sussman_reinit(const LevelSetField& phi, double dt, int iterations,
                             BoundaryMode mode = BoundaryMode::Replicate);

/// Zero level set by marching squares on sign(phi) with linear interpolation.
/// Saddle cells are resolved by the sign of the four-corner average.
ContourSet extract_contour(const LevelSetField& phi);

}  // namespace chanvese
