#include "chanvese/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace chanvese {

LevelSetField::LevelSetField(ScalarField field) : field_(std::move(field)) {}

SegmentationMask LevelSetField::mask() const {
  SegmentationMask m(width(), height());
  for (std::size_t i = 0; i < field_.size(); ++i) m.values()[i] = field_.values()[i] < 0.0;
  return m;
}

double ContourSet::length(double dx, double dy) const {
  double total = 0.0;
  for (const auto& line : polylines) {
    for (std::size_t i = 1; i < line.points.size(); ++i) {
      const double ex = (line.points[i].x - line.points[i - 1].x) * dx;
      const double ey = (line.points[i].y - line.points[i - 1].y) * dy;
      total += std::sqrt(ex * ex + ey * ey);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Curvature and upwind norm

double curvature_at(const ScalarField& f, int x, int y, double eps, BoundaryMode mode) {
  const double hx = f.dx();
  const double hy = f.dy();
  const double c = f(x, y);
  const double xp = sample(f, x + 1, y, mode);
  const double xm = sample(f, x - 1, y, mode);
  const double yp = sample(f, x, y + 1, mode);
  const double ym = sample(f, x, y - 1, mode);

  const double px = (xp - xm) / (2.0 * hx);
  const double py = (yp - ym) / (2.0 * hy);
  const double pxx = (xp - 2.0 * c + xm) / (hx * hx);
  const double pyy = (yp - 2.0 * c + ym) / (hy * hy);

  // y-central difference of the x-central difference, rows resolved first.
  const int yu = resolve_index(y + 1, f.height(), mode);
  const int yd = resolve_index(y - 1, f.height(), mode);
  const double px_up = (sample(f, x + 1, yu, mode) - sample(f, x - 1, yu, mode)) / (2.0 * hx);
  const double px_dn = (sample(f, x + 1, yd, mode) - sample(f, x - 1, yd, mode)) / (2.0 * hx);
  const double pxy = (px_up - px_dn) / (2.0 * hy);

  const double g2 = std::max(eps, px * px + py * py);
  const double num = pxx * py * py - 2.0 * px * py * pxy + pyy * px * px;
  return -(num / g2) * (1.0 / std::sqrt(g2));
}

ScalarField curvature(const LevelSetField& phi, double eps, BoundaryMode mode) {
  if (!(eps > 0.0)) throw ParameterError("curvature guard eps must be positive");
  const ScalarField& f = phi.field();
  require_stencil_dims(f);
  ScalarField k = f.like();
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) k(x, y) = curvature_at(f, x, y, eps, mode);
  return k;
}

namespace {

double sq(double v) noexcept { return v * v; }

void check_sign(int coeff_sign) {
  if (coeff_sign != 1 && coeff_sign != -1)
    throw ParameterError("upwind coefficient sign must be +1 or -1");
}

}  // namespace

double upwind_norm_at(const OneSidedDiffs& d, int x, int y, int coeff_sign) {
  const double xp = d.x_plus(x, y);
  const double xm = d.x_minus(x, y);
  const double yp = d.y_plus(x, y);
  const double ym = d.y_minus(x, y);
  if (coeff_sign > 0) {
    return std::sqrt(sq(std::max(xp, 0.0)) + sq(std::min(xm, 0.0)) + sq(std::max(yp, 0.0)) +
                     sq(std::min(ym, 0.0)));
  }
  return std::sqrt(sq(std::min(xp, 0.0)) + sq(std::max(xm, 0.0)) + sq(std::min(yp, 0.0)) +
                   sq(std::max(ym, 0.0)));
}

ScalarField upwind_norm(const LevelSetField& phi, int coeff_sign, BoundaryMode mode) {
  check_sign(coeff_sign);
  const OneSidedDiffs d = one_sided_diffs(phi.field(), mode);
  ScalarField out = phi.field().like();
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = upwind_norm_at(d, x, y, coeff_sign);
  return out;
}

// ---------------------------------------------------------------------------
// Signed distance construction

LevelSetField sdf_circle(int width, int height, double cx, double cy, double r) {
  if (!(r > 0.0)) throw ParameterError("circle radius must be positive");
  ScalarField f(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) f(x, y) = std::hypot(x - cx, y - cy) - r;
  return LevelSetField(std::move(f));
}

namespace {

constexpr double kFar = std::numeric_limits<double>::infinity();

// One pass of the lower-envelope transform over n samples spaced `stride`
// apart in `data`. Infinite samples never join the envelope.
void distance_pass(std::vector<double>& data, std::size_t offset, std::size_t stride, int n,
                   std::vector<double>& f, std::vector<int>& v, std::vector<double>& z) {
  for (int q = 0; q < n; ++q) f[q] = data[offset + static_cast<std::size_t>(q) * stride];

  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kFar) continue;
    double s = 0.0;
    while (k >= 0) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kFar : s;
    z[k + 1] = kFar;
  }
  if (k < 0) return;  // no finite samples on this line

  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    data[offset + static_cast<std::size_t>(q) * stride] = d * d + f[v[j]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const SegmentationMask& feature) {
  const int w = feature.width();
  const int h = feature.height();
  std::vector<double> d(feature.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = feature.values()[i] ? 0.0 : kFar;

  const int n = std::max(w, h);
  std::vector<double> f(n);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  for (int x = 0; x < w; ++x)
    distance_pass(d, static_cast<std::size_t>(x), static_cast<std::size_t>(w), h, f, v, z);
  for (int y = 0; y < h; ++y)
    distance_pass(d, static_cast<std::size_t>(y) * w, 1, w, f, v, z);
  return d;
}

LevelSetField sdf_from_mask(const SegmentationMask& mask) {
  const std::size_t inside = mask.count_inside();
  if (inside == 0 || inside == mask.size())
    throw DegenerateInputError("mask must contain both inside and outside pixels");

  SegmentationMask outside(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) outside.values()[i] = mask.values()[i] == 0;

  const std::vector<double> to_inside = squared_distance_transform(mask);
  const std::vector<double> to_outside = squared_distance_transform(outside);

  ScalarField f(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    f.values()[i] = mask.values()[i] ? -(std::sqrt(to_outside[i]) - 0.5)
                                     : std::sqrt(to_inside[i]) - 0.5;
  }
  return LevelSetField(std::move(f));
}

// ---------------------------------------------------------------------------
// Reinitialization

namespace {

// Per-axis slope estimate for the interface distance: the central difference
// unless a kink makes it much smaller than the largest one-sided difference.
double axis_slope(double fm, double c, double fp, double h) {
  const double central = std::abs(fp - fm) / 2.0;
  const double widest = std::max({central, std::abs(fp - c), std::abs(c - fm)});
  return (central >= 0.5 * widest ? central : widest) / h;
}

}  // namespace

LevelSetField sussman_reinit(const LevelSetField& phi, double dt, int iterations,
                             BoundaryMode mode) {
  const ScalarField& phi0 = phi.field();
  require_stencil_dims(phi0);
  const double h = std::min(phi0.dx(), phi0.dy());
  if (!(dt > 0.0) || dt > 0.5 * h)
    throw ParameterError("reinitialization step must satisfy 0 < dt <= 0.5*min(dx, dy)");
  if (iterations < 1) throw ParameterError("reinitialization needs at least one iteration");

  const int w = phi0.width();
  const int ht = phi0.height();

  ScalarField smooth_sign = phi0.like();
  ScalarField interface_distance = phi0.like();
  SegmentationMask at_interface(w, ht);
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = phi0(x, y);
      smooth_sign(x, y) = c / std::sqrt(c * c + h * h);

      const bool in = c < 0.0;
      const double xp = sample(phi0, x + 1, y, mode);
      const double xm = sample(phi0, x - 1, y, mode);
      const double yp = sample(phi0, x, y + 1, mode);
      const double ym = sample(phi0, x, y - 1, mode);
      const bool crossing = (xp < 0.0) != in || (xm < 0.0) != in || (yp < 0.0) != in ||
                            (ym < 0.0) != in;
      if (!crossing) continue;
      at_interface(x, y) = 1;
      const double gx = axis_slope(xm, c, xp, phi0.dx());
      const double gy = axis_slope(ym, c, yp, phi0.dy());
      const double g = std::max(std::sqrt(gx * gx + gy * gy), 1e-12);
      interface_distance(x, y) = c / g;
    }
  }

  ScalarField cur = phi0;
  ScalarField next = phi0.like();
  const double relax = dt / h;
  for (int it = 0; it < iterations; ++it) {
    const OneSidedDiffs d = one_sided_diffs_eno2(cur, mode);
    for (int y = 0; y < ht; ++y) {
      for (int x = 0; x < w; ++x) {
        const double p = cur(x, y);
        if (at_interface(x, y)) {
          const double s0 = phi0(x, y) < 0.0 ? -1.0 : (phi0(x, y) > 0.0 ? 1.0 : 0.0);
          next(x, y) = p - relax * (s0 * std::abs(p) - interface_distance(x, y));
          continue;
        }
        const double s = smooth_sign(x, y);
        if (s == 0.0) {
          next(x, y) = p;
          continue;
        }
        // The |grad| term enters with coefficient -S.
        const double g = upwind_norm_at(d, x, y, s > 0.0 ? -1 : 1);
        next(x, y) = p + dt * s * (1.0 - g);
      }
    }
    std::swap(cur, next);
  }
  return LevelSetField(std::move(cur));
}

// ---------------------------------------------------------------------------
// Marching squares

namespace {

// Edge ids: 2*(y*w + x) is the horizontal edge (x,y)-(x+1,y);
// 2*(y*w + x) + 1 is the vertical edge (x,y)-(x,y+1).
struct EdgeGrid {
  const ScalarField& f;

  int horizontal(int x, int y) const { return 2 * (y * f.width() + x); }
  int vertical(int x, int y) const { return 2 * (y * f.width() + x) + 1; }

  Point crossing(int id) const {
    const int cell = id / 2;
    const int x = cell % f.width();
    const int y = cell / f.width();
    const int x2 = (id % 2 == 0) ? x + 1 : x;
    const int y2 = (id % 2 == 0) ? y : y + 1;
    const double a = f(x, y);
    const double b = f(x2, y2);
    const double t = a / (a - b);
    return {x + t * (x2 - x), y + t * (y2 - y)};
  }
};

}  // namespace

ContourSet extract_contour(const LevelSetField& phi) {
  const ScalarField& f = phi.field();
  require_stencil_dims(f);
  const int w = f.width();
  const int h = f.height();
  const EdgeGrid edges{f};

  std::vector<std::pair<int, int>> segments;
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const double v0 = f(x, y);
      const double v1 = f(x + 1, y);
      const double v2 = f(x + 1, y + 1);
      const double v3 = f(x, y + 1);
      const bool i0 = v0 < 0.0, i1 = v1 < 0.0, i2 = v2 < 0.0, i3 = v3 < 0.0;
      const int top = edges.horizontal(x, y);
      const int right = edges.vertical(x + 1, y);
      const int bottom = edges.horizontal(x, y + 1);
      const int left = edges.vertical(x, y);

      std::array<int, 4> crossed{};
      int n = 0;
      if (i0 != i1) crossed[n++] = top;
      if (i1 != i2) crossed[n++] = right;
      if (i2 != i3) crossed[n++] = bottom;
      if (i3 != i0) crossed[n++] = left;

      if (n == 2) {
        segments.emplace_back(crossed[0], crossed[1]);
      } else if (n == 4) {
        const bool center_inside = (v0 + v1 + v2 + v3) / 4.0 < 0.0;
        if (center_inside == i0) {
          // Corners 0 and 2 join through the centre; cut off corners 1 and 3.
          segments.emplace_back(top, right);
          segments.emplace_back(bottom, left);
        } else {
          segments.emplace_back(left, top);
          segments.emplace_back(right, bottom);
        }
      }
    }
  }

  std::vector<std::array<int, 2>> at_edge(static_cast<std::size_t>(2) * w * h, {-1, -1});
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    for (int e : {segments[s].first, segments[s].second}) {
      auto& slot = at_edge[e];
      (slot[0] < 0 ? slot[0] : slot[1]) = s;
    }
  }

  auto other_segment = [&](int edge, int seg) {
    const auto& slot = at_edge[edge];
    return slot[0] == seg ? slot[1] : slot[0];
  };
  auto other_edge = [&](int seg, int edge) {
    return segments[seg].first == edge ? segments[seg].second : segments[seg].first;
  };

  ContourSet out;
  std::vector<char> used(segments.size(), 0);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (used[s]) continue;
    used[s] = 1;
    std::vector<int> chain{segments[s].first, segments[s].second};
    bool closed = false;

    // Walk forward from the second edge.
    for (int seg = s, edge = chain.back();;) {
      const int next = other_segment(edge, seg);
      if (next < 0) break;
      if (used[next]) {
        closed = next == s;
        break;
      }
      used[next] = 1;
      edge = other_edge(next, edge);
      seg = next;
      if (edge == chain.front()) {
        chain.push_back(edge);
        closed = true;
        break;
      }
      chain.push_back(edge);
    }
    if (!closed) {
      std::vector<int> head;
      for (int seg = s, edge = chain.front();;) {
        const int next = other_segment(edge, seg);
        if (next < 0 || used[next]) break;
        used[next] = 1;
        edge = other_edge(next, edge);
        seg = next;
        head.push_back(edge);
      }
      chain.insert(chain.begin(), head.rbegin(), head.rend());
    }

    Polyline line;
    line.closed = closed;
    line.points.reserve(chain.size());
    for (int e : chain) line.points.push_back(edges.crossing(e));
    out.polylines.push_back(std::move(line));
  }
  return out;
}

}  // namespace chanvese
