#pragma once

#include <array>
#include <cstddef>

#include "chanvese/field.hpp"

namespace chanvese {

struct MetricsReport {
  double dice = 0.0;
  double iou = 0.0;
  double pixel_accuracy = 0.0;
  std::size_t inside_count = 0;   // inside pixels of the evaluated mask
  std::size_t outside_count = 0;
};

/// 2|A n B| / (|A| + |B|); 1 when both masks are empty.
double dice(const SegmentationMask& a, const SegmentationMask& b);

/// |A n B| / |A u B|; 1 when both masks are empty.
double iou(const SegmentationMask& a, const SegmentationMask& b);

double pixel_accuracy(const SegmentationMask& a, const SegmentationMask& b);

MetricsReport evaluate(const SegmentationMask& prediction, const SegmentationMask& truth);

enum class OtsuPolarity { BrightInside, DarkInside };

using Histogram = std::array<std::size_t, 256>;

/// 256-bin histogram of an image in [0,1]; bin = round(255 * value), clamped.
Histogram histogram256(const GrayImage& img);

/// Bin t maximizing the between-class variance of {bin <= t} vs {bin > t}.
/// Ties resolve to the lowest t. Throws DegenerateInputError when fewer than
/// two bins are occupied.
int otsu_level(const Histogram& hist);

/// Otsu binarization. BrightInside marks {bin > t} as inside.
SegmentationMask otsu_threshold(const GrayImage& img,
                                OtsuPolarity polarity = OtsuPolarity::BrightInside);

}  // namespace chanvese
