#include "chanvese/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace chanvese {

namespace {

struct Overlap {
  std::size_t a = 0, b = 0, both = 0, agree = 0, total = 0;
};

Overlap count(const SegmentationMask& a, const SegmentationMask& b) {
  require_same_shape(a, b, "mask comparison");
  Overlap o;
  o.total = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ia = a.values()[i] != 0;
    const bool ib = b.values()[i] != 0;
    o.a += ia;
    o.b += ib;
    o.both += ia && ib;
    o.agree += ia == ib;
  }
  return o;
}

}  // namespace

double dice(const SegmentationMask& a, const SegmentationMask& b) {
  const Overlap o = count(a, b);
  if (o.a + o.b == 0) return 1.0;
  return 2.0 * static_cast<double>(o.both) / static_cast<double>(o.a + o.b);
}

double iou(const SegmentationMask& a, const SegmentationMask& b) {
  const Overlap o = count(a, b);
  const std::size_t uni = o.a + o.b - o.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.both) / static_cast<double>(uni);
}

double pixel_accuracy(const SegmentationMask& a, const SegmentationMask& b) {
  const Overlap o = count(a, b);
  if (o.total == 0) return 1.0;
  return static_cast<double>(o.agree) / static_cast<double>(o.total);
}

MetricsReport evaluate(const SegmentationMask& prediction, const SegmentationMask& truth) {
  MetricsReport r;
  r.dice = dice(prediction, truth);
  r.iou = iou(prediction, truth);
  r.pixel_accuracy = pixel_accuracy(prediction, truth);
  r.inside_count = prediction.count_inside();
  r.outside_count = prediction.size() - r.inside_count;
  return r;
}

Histogram histogram256(const GrayImage& img) {
  Histogram h{};
  for (double v : img.values()) {
    const long bin = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    ++h[static_cast<std::size_t>(bin)];
  }
  return h;
}

int otsu_level(const Histogram& hist) {
  const auto occupied = std::count_if(hist.begin(), hist.end(), [](std::size_t c) { return c > 0; });
  if (occupied < 2)
    throw DegenerateInputError("Otsu threshold needs at least two distinct intensity levels");

  double total = 0.0, weighted = 0.0;
  for (int i = 0; i < 256; ++i) {
    total += static_cast<double>(hist[i]);
    weighted += static_cast<double>(i) * static_cast<double>(hist[i]);
  }

  int best = -1;
  double best_var = -1.0;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += static_cast<double>(hist[t]);
    sum0 += static_cast<double>(t) * static_cast<double>(hist[t]);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mean0 = sum0 / w0;
    const double mean1 = (weighted - sum0) / w1;
    const double between = w0 * w1 * (mean0 - mean1) * (mean0 - mean1);
    if (between > best_var) {
      best_var = between;
      best = t;
    }
  }
  return best;
}

SegmentationMask otsu_threshold(const GrayImage& img, OtsuPolarity polarity) {
  const int level = otsu_level(histogram256(img));
  SegmentationMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const long bin = std::lround(std::clamp(img.values()[i], 0.0, 1.0) * 255.0);
    const bool bright = bin > level;
    mask.values()[i] = polarity == OtsuPolarity::BrightInside ? bright : !bright;
  }
  return mask;
}

}  // namespace chanvese
