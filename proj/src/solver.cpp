#include "chanvese/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chanvese {

double SolverParams::max_tau() const noexcept { return std::min(dx * dx, dy * dy) / 2.0; }

double SolverParams::reinit_dt() const noexcept { return 0.5 * std::min(dx, dy); }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// The evolution always runs on the parameter spacing.
ScalarField with_spacing(const ScalarField& f, const SolverParams& p) {
  if (f.dx() == p.dx && f.dy() == p.dy) return f;
  return ScalarField(f.width(), f.height(), f.values(), p.dx, p.dy);
}

}  // namespace

SolverParams cfl_check(const SolverParams& p) {
  require(finite_nonneg(p.lambda1), "lambda1 must be a finite value >= 0");
  require(finite_nonneg(p.lambda2), "lambda2 must be a finite value >= 0");
  require(finite_nonneg(p.mu), "mu must be a finite value >= 0");
  require(std::isfinite(p.nu), "nu must be finite");
  require(std::isfinite(p.dx) && p.dx > 0.0, "dx must be positive");
  require(std::isfinite(p.dy) && p.dy > 0.0, "dy must be positive");
  require(std::isfinite(p.tau) && p.tau > 0.0, "tau must be positive");
  require(p.max_iters >= 0, "max_iters must be >= 0");
  require(!std::isnan(p.band_width), "band_width must be a number");
  require(p.band_width >= 2.0, "band_width must be >= 2");
  require(p.reinit_every >= 0, "reinit_every must be >= 0");
  require(p.reinit_sweeps >= 1, "reinit_sweeps must be >= 1");
  require(p.convergence_tol > 0.0 && p.convergence_tol < 1.0,
          "convergence_tol must lie in (0, 1)");
  require(p.convergence_window >= 1, "convergence_window must be >= 1");
  require(p.convergence_interval >= 1, "convergence_interval must be >= 1");
  require(p.curvature_eps > 0.0, "curvature_eps must be positive");
  if (p.tau > p.max_tau()) throw CflError(p.tau, p.max_tau());
  return p;
}

RegionMeans region_means(const GrayImage& img, const LevelSetField& phi) {
  require_same_shape(img, phi.field(), "region_means");
  // Sums are taken relative to the first pixel of each region so that a
  // uniform region yields its value exactly.
  double ref_in = 0.0, ref_out = 0.0;
  double sum_in = 0.0, sum_out = 0.0;
  std::size_t n_in = 0, n_out = 0;
  const auto& f = phi.field().values();
  const auto& I = img.values();
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (f[i] < 0.0) {
      if (n_in++ == 0) ref_in = I[i];
      sum_in += I[i] - ref_in;
    } else if (f[i] > 0.0) {
      if (n_out++ == 0) ref_out = I[i];
      sum_out += I[i] - ref_out;
    }
  }
  return {n_in ? ref_in + sum_in / static_cast<double>(n_in) : 0.0,
          n_out ? ref_out + sum_out / static_cast<double>(n_out) : 0.0};
}

EnergyRecord energy(const GrayImage& img, const LevelSetField& phi, const SolverParams& params) {
  require_same_shape(img, phi.field(), "energy");
  const RegionMeans m = region_means(img, phi);
  const double cell = params.dx * params.dy;
  double in = 0.0, out = 0.0;
  std::size_t area = 0;
  const auto& f = phi.field().values();
  const auto& I = img.values();
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (f[i] < 0.0) {
      in += (I[i] - m.u) * (I[i] - m.u);
      ++area;
    } else if (f[i] > 0.0) {
      out += (I[i] - m.v) * (I[i] - m.v);
    }
  }
  EnergyRecord r;
  r.fit_inside = params.lambda1 * in * cell;
  r.fit_outside = params.lambda2 * out * cell;
  r.length_term = params.mu * extract_contour(phi).length(params.dx, params.dy);
  r.area_term = params.nu * static_cast<double>(area) * cell;
  r.total = r.fit_inside + r.fit_outside + r.length_term + r.area_term;
  return r;
}

LevelSetField step(const GrayImage& img, const LevelSetField& phi, const RegionMeans& means,
                   const SolverParams& params) {
  require_same_shape(img, phi.field(), "step");
  const ScalarField f = with_spacing(phi.field(), params);
  require_stencil_dims(f);
  const BoundaryMode mode = params.boundary;
  const OneSidedDiffs d = one_sided_diffs(f, mode);
  const int area_sign = params.nu > 0.0 ? 1 : -1;
  const double hx = f.dx();
  const double hy = f.dy();

  ScalarField next = f.like();
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double p = f(x, y);
      const double I = img(x, y);
      const double a = params.lambda1 * (I - means.u) * (I - means.u);
      const double b = params.lambda2 * (I - means.v) * (I - means.v);
      const double fit_in = a * upwind_norm_at(d, x, y, 1);
      const double fit_out = b * upwind_norm_at(d, x, y, -1);

      double length = 0.0;
      if (std::abs(p) < params.band_width) {
        const double k = curvature_at(f, x, y, params.curvature_eps, mode);
        const double px = (sample(f, x + 1, y, mode) - sample(f, x - 1, y, mode)) / (2.0 * hx);
        const double py = (sample(f, x, y + 1, mode) - sample(f, x, y - 1, mode)) / (2.0 * hy);
        length = params.mu * k * std::sqrt(px * px + py * py);
      }
      const double area = params.nu != 0.0 ? params.nu * upwind_norm_at(d, x, y, area_sign) : 0.0;

      const double v = p + params.tau * (fit_in - fit_out - length + area);
      if (!std::isfinite(v)) throw NumericalInstabilityError(0, x, y);
      next(x, y) = v;
    }
  }
  return LevelSetField(std::move(next));
}

bool converged(const SegmentationMask& prev, const SegmentationMask& cur,
               const SolverParams& params) {
  require_same_shape(prev, cur, "converged");
  if (cur.size() == 0) return true;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < cur.size(); ++i)
    changed += (prev.values()[i] != 0) != (cur.values()[i] != 0);
  return static_cast<double>(changed) / static_cast<double>(cur.size()) < params.convergence_tol;
}

SegmentationResult run(const GrayImage& img, const LevelSetField& phi0,
                       const SolverParams& params, const IterationObserver& observer) {
  const SolverParams p = cfl_check(params);
  require_same_shape(img, phi0.field(), "run");
  require_stencil_dims(phi0.field());

  SegmentationResult result;
  result.mask = phi0.mask();
  const std::size_t inside = result.mask.count_inside();
  if (inside == 0 || inside == result.mask.size())
    throw DegenerateInputError("initial level set must have pixels on both sides of the contour");

  if (p.max_iters == 0) {
    result.phi = phi0;
    result.contours = extract_contour(phi0);
    const RegionMeans m = region_means(img, phi0);
    result.u = m.u;
    result.v = m.v;
    return result;
  }

  LevelSetField phi(with_spacing(phi0.field(), p));
  SegmentationMask reference = result.mask;
  int passes = 0;
  result.trace.reserve(static_cast<std::size_t>(p.max_iters));

  for (int it = 1; it <= p.max_iters; ++it) {
    const RegionMeans m = region_means(img, phi);
    try {
      phi = step(img, phi, m, p);
    } catch (const NumericalInstabilityError& e) {
      throw NumericalInstabilityError(it, e.x(), e.y());
    }
    result.trace.push_back(energy(img, phi, p));
    if (p.reinit_every > 0 && it % p.reinit_every == 0)
      phi = sussman_reinit(phi, p.reinit_dt(), p.reinit_sweeps, p.boundary);
    result.iterations = it;
    if (observer) observer(it, phi);

    const SegmentationMask mask = phi.mask();
    const std::size_t n_in = mask.count_inside();
    if (n_in == 0 || n_in == mask.size()) break;  // one region vanished

    if (it % p.convergence_interval == 0) {
      passes = converged(reference, mask, p) ? passes + 1 : 0;
      reference = mask;
      if (passes >= p.convergence_window) {
        result.converged = true;
        break;
      }
    }
  }

  result.mask = phi.mask();
  result.contours = extract_contour(phi);
  const RegionMeans m = region_means(img, phi);
  result.u = m.u;
  result.v = m.v;
  result.phi = std::move(phi);
  return result;
}

}  // namespace chanvese
