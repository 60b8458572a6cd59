"""Chan-Vese active contour segmentation on a level-set grid.

Arrays are indexed ``[y, x]``; level sets are negative inside the contour.
"""

from ._core import (
    BoundaryMode,
    CflError,
    DegenerateInputError,
    DimensionError,
    Error,
    FormatError,
    IoError,
    NumericalInstabilityError,
    ParameterError,
    SegmentationResult,
    SolverParams,
    cfl_check,
    curvature,
    dice,
    energy,
    extract_contour,
    gaussian_smooth,
    iou,
    load_image,
    load_mask,
    normalize,
    otsu_threshold,
    region_means,
    run,
    save_mask,
    sdf_circle,
    sdf_from_mask,
    step,
    sussman_reinit,
    upwind_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
