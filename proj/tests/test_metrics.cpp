#include <doctest.h>

#include <algorithm>
#include <random>

#include "chanvese/metrics.hpp"
#include "support.hpp"

using namespace chanvese;
using namespace chanvese::testing;

namespace {

SegmentationMask stripe(int w, int h, int x0, int x1) {
  SegmentationMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = x0; x < x1; ++x) m(x, y) = 1;
  return m;
}

// Exhaustive search over all 256 thresholds using two-pass class statistics.
int brute_force_otsu(const GrayImage& img) {
  std::vector<int> bins;
  for (double v : img.values()) bins.push_back(static_cast<int>(std::lround(255.0 * v)));
  int best_t = -1;
  double best = -1.0;
  for (int t = 0; t < 256; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (int b : bins) (b <= t ? (n0 += 1, s0 += b) : (n1 += 1, s1 += b));
    if (n0 == 0 || n1 == 0) continue;
    const double n = n0 + n1;
    const double diff = s0 / n0 - s1 / n1;
    const double between = (n0 / n) * (n1 / n) * diff * diff;
    if (between > best * (1.0 + 1e-12)) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

TEST_CASE("dice and iou examples") {
  const auto a = stripe(10, 10, 0, 5);
  CHECK(dice(a, a) == 1.0);
  CHECK(iou(a, a) == 1.0);
  const auto b = stripe(10, 10, 5, 10);
  CHECK(dice(a, b) == 0.0);
  CHECK(iou(a, b) == 0.0);
  // 100 px each, 50 overlapping.
  const auto c = stripe(20, 10, 0, 10), d = stripe(20, 10, 5, 15);
  CHECK(c.count_inside() == 100);
  CHECK(dice(c, d) == 0.5);
  CHECK(iou(c, d) == doctest::Approx(50.0 / 150.0));
  const SegmentationMask empty(6, 6);
  CHECK(dice(empty, empty) == 1.0);
  CHECK(iou(empty, empty) == 1.0);
  CHECK_THROWS_AS(dice(SegmentationMask(4, 5), SegmentationMask(5, 4)), DimensionError);
  CHECK_THROWS_AS(iou(SegmentationMask(4, 5), SegmentationMask(5, 4)), DimensionError);
}

TEST_CASE("overlap properties on random masks") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> P(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_mask(15, 12, rng, P(rng));
    const auto b = random_mask(15, 12, rng, P(rng));
    const double d = dice(a, b), j = iou(a, b);
    CHECK(d == dice(b, a));
    CHECK(j <= d);
    CHECK(d == doctest::Approx(2.0 * j / (1.0 + j)).epsilon(1e-12));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);

    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) agree += (a.values()[i] != 0) == (b.values()[i] != 0);
    CHECK(pixel_accuracy(a, b) == doctest::Approx(double(agree) / double(a.size())));

    const auto r = evaluate(a, b);
    CHECK(r.dice == d);
    CHECK(r.iou == j);
    CHECK(r.inside_count == a.count_inside());
    CHECK(r.inside_count + r.outside_count == a.size());
  }
}

TEST_CASE("otsu") {
  SUBCASE("two values in any proportion") {
    for (int n_high : {1, 3, 50, 99}) {
      GrayImage img(10, 10);
      for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = i < std::size_t(n_high) ? 0.8 : 0.2;
      const auto m = otsu_threshold(img);
      for (std::size_t i = 0; i < img.size(); ++i) CHECK((m.values()[i] != 0) == (img.values()[i] == 0.8));
      CHECK(otsu_level(histogram256(img)) == brute_force_otsu(img));
      // Lowest qualifying threshold: right at the lower value.
      CHECK(otsu_level(histogram256(img)) == 51);
    }
  }

  SUBCASE("zero/one image") {
    GrayImage img(8, 8);
    for (int x = 0; x < 8; ++x) img(x, 3) = 1.0;
    const auto m = otsu_threshold(img);
    CHECK(m.count_inside() == 8);
    for (int x = 0; x < 8; ++x) CHECK(m.inside(x, 3));
    const auto dark = otsu_threshold(img, OtsuPolarity::DarkInside);
    CHECK(dark.count_inside() == 56);
  }

  SUBCASE("matches exhaustive search on random images") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
      GrayImage img(24, 24);
      for (std::size_t i = 0; i < img.size(); ++i) {
        const double base = trial % 2 ? U(rng) : (i % 3 ? 0.3 : 0.7) + N(rng);
        img.values()[i] = std::clamp(base, 0.0, 1.0);
      }
      CHECK(otsu_level(histogram256(img)) == brute_force_otsu(img));
    }
  }

  SUBCASE("invariant under pixel permutation") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GrayImage img(20, 16);
    for (double& v : img.values()) v = U(rng) * U(rng);
    const auto base = otsu_threshold(img);
    std::vector<std::size_t> perm(img.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    GrayImage shuffled(20, 16);
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.values()[i] = img.values()[perm[i]];
    const auto m = otsu_threshold(shuffled);
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(m.values()[i] == base.values()[perm[i]]);
  }

  SUBCASE("constant image is degenerate") {
    GrayImage img(5, 5);
    for (double& v : img.values()) v = 0.4;
    CHECK_THROWS_AS(otsu_threshold(img), DegenerateInputError);
  }

  SUBCASE("histogram binning") {
    GrayImage img(3, 3);
    img(0, 0) = 1.0;
    img(1, 0) = 0.5;  // 127.5 rounds to 128
    img(2, 0) = 1.5;  // clamped
    const auto h = histogram256(img);
    CHECK(h[0] == 6);
    CHECK(h[128] == 1);
    CHECK(h[255] == 2);
  }
}
