#include "chanvese/grid.hpp"

#include <cmath>

namespace chanvese {

int resolve_index(int i, int n, BoundaryMode mode) noexcept {
  if (i >= 0 && i < n) return i;
  if (mode == BoundaryMode::Periodic) {
    int r = i % n;
    return r < 0 ? r + n : r;
  }
  return i < 0 ? 0 : n - 1;
}

double sample(const ScalarField& f, int x, int y, BoundaryMode mode) {
  return f(resolve_index(x, f.width(), mode), resolve_index(y, f.height(), mode));
}

void require_stencil_dims(const ScalarField& f) {
  if (f.width() < 3 || f.height() < 3)
    throw DimensionError("finite-difference stencils need at least 3x3 samples, got " +
                         std::to_string(f.width()) + "x" + std::to_string(f.height()));
}

namespace {

template <typename Fn>
ScalarField map_points(const ScalarField& f, Fn&& fn) {
  require_stencil_dims(f);
  ScalarField out = f.like();
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) out(x, y) = fn(x, y);
  return out;
}

double minmod(double a, double b) noexcept {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

ScalarField central_dx(const ScalarField& f, BoundaryMode mode) {
  const double h = f.dx();
  return map_points(f, [&](int x, int y) {
    return (sample(f, x + 1, y, mode) - sample(f, x - 1, y, mode)) / (2.0 * h);
  });
}

ScalarField central_dy(const ScalarField& f, BoundaryMode mode) {
  const double h = f.dy();
  return map_points(f, [&](int x, int y) {
    return (sample(f, x, y + 1, mode) - sample(f, x, y - 1, mode)) / (2.0 * h);
  });
}

ScalarField second_dxx(const ScalarField& f, BoundaryMode mode) {
  const double h2 = f.dx() * f.dx();
  return map_points(f, [&](int x, int y) {
    return (sample(f, x + 1, y, mode) - 2.0 * f(x, y) + sample(f, x - 1, y, mode)) / h2;
  });
}

ScalarField second_dyy(const ScalarField& f, BoundaryMode mode) {
  const double h2 = f.dy() * f.dy();
  return map_points(f, [&](int x, int y) {
    return (sample(f, x, y + 1, mode) - 2.0 * f(x, y) + sample(f, x, y - 1, mode)) / h2;
  });
}

ScalarField mixed_dxy(const ScalarField& f, BoundaryMode mode) {
  return central_dy(central_dx(f, mode), mode);
}

OneSidedDiffs one_sided_diffs(const ScalarField& f, BoundaryMode mode) {
  require_stencil_dims(f);
  OneSidedDiffs d{f.like(), f.like(), f.like(), f.like()};
  const double hx = f.dx();
  const double hy = f.dy();
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double c = f(x, y);
      d.x_plus(x, y) = (sample(f, x + 1, y, mode) - c) / hx;
      d.x_minus(x, y) = (c - sample(f, x - 1, y, mode)) / hx;
      d.y_plus(x, y) = (sample(f, x, y + 1, mode) - c) / hy;
      d.y_minus(x, y) = (c - sample(f, x, y - 1, mode)) / hy;
    }
  }
  return d;
}

OneSidedDiffs one_sided_diffs_eno2(const ScalarField& f, BoundaryMode mode) {
  require_stencil_dims(f);
  // Undivided second differences along each axis.
  ScalarField sxx = f.like();
  ScalarField syy = f.like();
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double c = f(x, y);
      sxx(x, y) = sample(f, x + 1, y, mode) - 2.0 * c + sample(f, x - 1, y, mode);
      syy(x, y) = sample(f, x, y + 1, mode) - 2.0 * c + sample(f, x, y - 1, mode);
    }
  }
  OneSidedDiffs d = one_sided_diffs(f, mode);
  const double hx = f.dx();
  const double hy = f.dy();
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double cxx = sxx(x, y);
      const double cyy = syy(x, y);
      d.x_plus(x, y) -= 0.5 * minmod(cxx, sample(sxx, x + 1, y, mode)) / hx;
      d.x_minus(x, y) += 0.5 * minmod(cxx, sample(sxx, x - 1, y, mode)) / hx;
      d.y_plus(x, y) -= 0.5 * minmod(cyy, sample(syy, x, y + 1, mode)) / hy;
      d.y_minus(x, y) += 0.5 * minmod(cyy, sample(syy, x, y - 1, mode)) / hy;
    }
  }
  return d;
}

ScalarField central_gradient_norm(const ScalarField& f, BoundaryMode mode) {
  const double hx = f.dx();
  const double hy = f.dy();
  return map_points(f, [&](int x, int y) {
    const double fx = (sample(f, x + 1, y, mode) - sample(f, x - 1, y, mode)) / (2.0 * hx);
    const double fy = (sample(f, x, y + 1, mode) - sample(f, x, y - 1, mode)) / (2.0 * hy);
    return std::sqrt(fx * fx + fy * fy);
  });
}

}  // namespace chanvese
