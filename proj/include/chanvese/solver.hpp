#pragma once

#include <functional>
#include <vector>

#include "chanvese/field.hpp"
#include "chanvese/grid.hpp"
#include "chanvese/levelset.hpp"

namespace chanvese {

struct SolverParams {
  double lambda1 = 1.0;  // inside fit weight
  double lambda2 = 1.0;  // outside fit weight
  double mu = 0.5;       // length weight
  double nu = 0.015;     // area weight
  double tau = 0.2;      // time step
  int max_iters = 500;
  double band_width = 3.0;  // curvature is evaluated where |phi| < band_width
  int reinit_every = 25;    // 0 disables reinitialization
  int reinit_sweeps = 10;
  double convergence_tol = 0.0005;  // fraction of pixels allowed to change
  int convergence_window = 3;       // consecutive passing checks required
  int convergence_interval = 10;    // iterations between compared masks
  BoundaryMode boundary = BoundaryMode::Replicate;
  double dx = 1.0;
  double dy = 1.0;
  double curvature_eps = kCurvatureEps;

  /// Largest time step admitted by the explicit scheme: min(dx^2, dy^2) / 2.
  double max_tau() const noexcept;
  /// Pseudo-time step used by the periodic reinitialization.
  double reinit_dt() const noexcept;
};

struct EnergyRecord {
  double fit_inside = 0.0;   // lambda1 * sum_{phi<0} (I - u)^2
  double fit_outside = 0.0;  // lambda2 * sum_{phi>0} (I - v)^2
  double length_term = 0.0;  // mu * contour length
  double area_term = 0.0;    // nu * |{phi < 0}|
  double total = 0.0;

  double fit() const noexcept { return fit_inside + fit_outside; }
};

using EnergyTrace = std::vector<EnergyRecord>;

struct RegionMeans {
  double u = 0.0;  // mean intensity inside (phi < 0)
  double v = 0.0;  // mean intensity outside (phi > 0)
};

struct SegmentationResult {
  LevelSetField phi;
  SegmentationMask mask;
  ContourSet contours;
  EnergyTrace trace;
  int iterations = 0;
  bool converged = false;
  double u = 0.0;
  double v = 0.0;
};

/// Checks every parameter range and the CFL bound tau <= min(dx^2, dy^2)/2.
/// Returns the parameters unchanged; throws CflError or ParameterError.
SolverParams cfl_check(const SolverParams& params);

/// Pixels with phi exactly 0 belong to neither region; an empty region has mean 0.
RegionMeans region_means(const GrayImage& img, const LevelSetField& phi);

EnergyRecord energy(const GrayImage& img, const LevelSetField& phi, const SolverParams& params);

/// One explicit gradient-descent step of the level-set evolution
///   phi_t = l1 (I-u)^2 |grad phi| - l2 (I-v)^2 |grad phi| - mu K |grad phi| + nu |grad phi|
/// with upwinded norms for the fit and area terms and a central-difference
/// norm for the curvature term. K is evaluated only where |phi| < band_width.
/// Throws NumericalInstabilityError if any updated value is not finite.
LevelSetField step(const GrayImage& img, const LevelSetField& phi, const RegionMeans& means,
                   const SolverParams& params);

/// True when the fraction of differing pixels is below params.convergence_tol.
bool converged(const SegmentationMask& prev, const SegmentationMask& cur,
               const SolverParams& params);

/// Called after every completed iteration with the 1-based iteration number.
using IterationObserver = std::function<void(int iteration, const LevelSetField& phi)>;

/// Full evolution from phi0. Stops after max_iters, after convergence_window
/// consecutive converged() checks spaced convergence_interval iterations
/// apart, or when one region becomes empty.
SegmentationResult run(const GrayImage& img, const LevelSetField& phi0,
                       const SolverParams& params, const IterationObserver& observer = {});

}  // namespace chanvese
