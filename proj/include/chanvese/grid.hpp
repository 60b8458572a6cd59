#pragma once

#include "chanvese/field.hpp"

/// Finite-difference stencils on ScalarField.
///
/// All stencils require at least 3 samples along each axis. Neighbours that
/// fall outside the grid are supplied by the BoundaryMode: Replicate clamps
/// the index to the nearest edge sample (zero normal derivative), Periodic
/// wraps around.
namespace chanvese {

enum class BoundaryMode { Replicate, Periodic };

/// Value of f at (x, y) with out-of-range indices resolved by `mode`.
double sample(const ScalarField& f, int x, int y, BoundaryMode mode);

/// Index along an axis of length n with out-of-range values resolved by `mode`.
int resolve_index(int i, int n, BoundaryMode mode) noexcept;

/// Throws DimensionError if either side is shorter than 3.
void require_stencil_dims(const ScalarField& f);

// (f(x+dx) - f(x-dx)) / 2dx
ScalarField central_dx(const ScalarField& f, BoundaryMode mode = BoundaryMode::Replicate);
ScalarField central_dy(const ScalarField& f, BoundaryMode mode = BoundaryMode::Replicate);

// (f(x+dx) - 2f(x) + f(x-dx)) / dx^2
ScalarField second_dxx(const ScalarField& f, BoundaryMode mode = BoundaryMode::Replicate);
ScalarField second_dyy(const ScalarField& f, BoundaryMode mode = BoundaryMode::Replicate);

/// Central y-difference of the central x-difference field.
ScalarField mixed_dxy(const ScalarField& f, BoundaryMode mode = BoundaryMode::Replicate);

struct OneSidedDiffs {
  ScalarField x_plus;   // (f(x+dx) - f(x)) / dx
  ScalarField x_minus;  // (f(x) - f(x-dx)) / dx
  ScalarField y_plus;
  ScalarField y_minus;
};

OneSidedDiffs one_sided_diffs(const ScalarField& f,
                              BoundaryMode mode = BoundaryMode::Replicate);

/// Second-order ENO one-sided differences: each first-order difference is
/// corrected by half the minmod-limited second difference on its upwind side.
/// Exact for quadratics away from the boundary; reduces to the first-order
/// differences where the second differences change sign.
OneSidedDiffs one_sided_diffs_eno2(const ScalarField& f,
                                   BoundaryMode mode = BoundaryMode::Replicate);

/// Central-difference gradient magnitude sqrt(fx^2 + fy^2).
ScalarField central_gradient_norm(const ScalarField& f,
                                  BoundaryMode mode = BoundaryMode::Replicate);

}  // namespace chanvese
