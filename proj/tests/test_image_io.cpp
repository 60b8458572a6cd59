#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "chanvese/image_io.hpp"
#include "support.hpp"

using namespace chanvese;
using namespace chanvese::testing;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

GrayImage random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GrayImage img(w, h);
  for (double& v : img.values()) v = U(rng);
  return img;
}

}  // namespace

TEST_CASE("PGM loading") {
  const auto dir = temp_dir("pgm");

  SUBCASE("ascii P2 with comments, rescaled to 255") {
    write_bytes(dir / "a.pgm", "P2\n# comment\n3 3\n# another\n15\n0 15 3\n4 5 6\n7 8 9\n");
    const auto img = load_image(dir / "a.pgm");
    CHECK(img.width() == 3);
    CHECK(img.height() == 3);
    CHECK(img(0, 0) == 0.0);
    CHECK(img(1, 0) == doctest::Approx(255.0));
    CHECK(img(2, 0) == doctest::Approx(3.0 * 255.0 / 15.0));
  }

  SUBCASE("binary P5") {
    std::string bytes = "P5\n4 3\n255\n";
    for (int i = 0; i < 12; ++i) bytes.push_back(static_cast<char>(i * 20));
    write_bytes(dir / "b.pgm", bytes);
    const auto img = load_image(dir / "b.pgm");
    CHECK(img.width() == 4);
    CHECK(img.height() == 3);
    CHECK(img(1, 2) == 9 * 20.0);
  }

  SUBCASE("images smaller than 3x3 are rejected") {
    write_bytes(dir / "tiny.pgm", "P2\n2 2\n255\n1 2 3 4\n");
    CHECK_THROWS_AS(load_image(dir / "tiny.pgm"), DimensionError);
  }

  SUBCASE("truncated data") {
    write_bytes(dir / "short.pgm", "P5\n4 4\n255\nabc");
    CHECK_THROWS_AS(load_image(dir / "short.pgm"), FormatError);
  }

  SUBCASE("16-bit PGM is unsupported") {
    write_bytes(dir / "wide.pgm", "P2\n3 3\n65535\n0 0 0 0 0 0 0 0 0\n");
    CHECK_THROWS_AS(load_image(dir / "wide.pgm"), FormatError);
  }

  SUBCASE("unsupported formats are named") {
    write_bytes(dir / "c.ppm", "P6\n3 3\n255\n" + std::string(27, '\0'));
    try {
      load_image(dir / "c.ppm");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("P6") != std::string::npos);
    }
    write_bytes(dir / "d.bmp", "BM\x10\x00\x00\x00garbage");
    CHECK_THROWS_AS(load_image(dir / "d.bmp"), FormatError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_image(dir / "nope.pgm"), IoError);
  }
}

TEST_CASE("PNG round trips") {
  const auto dir = temp_dir("png");

  SUBCASE("grayscale") {
    GrayImage img(5, 4);
    for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = double(i) / 19.0;
    save_png(img, dir / "g.png");
    const auto back = load_image(dir / "g.png");
    REQUIRE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i)
      CHECK(back.values()[i] == std::round(255.0 * img.values()[i]));
  }

  SUBCASE("color is reduced with luma weights") {
    RgbImage rgb{3, 3, std::vector<std::uint8_t>(27, 0)};
    const std::uint8_t colors[3][3] = {{255, 0, 0}, {0, 255, 0}, {0, 0, 255}};
    for (int i = 0; i < 9; ++i)
      for (int c = 0; c < 3; ++c) rgb.pixels[3 * i + c] = colors[i % 3][c];
    save_png(rgb, dir / "c.png");
    CHECK(load_png_rgb(dir / "c.png") == rgb);
    const auto gray = load_image(dir / "c.png");
    CHECK_NEAR(gray(0, 0), 0.299 * 255.0, 0.5 + 1e-9);
    CHECK_NEAR(gray(1, 0), 0.587 * 255.0, 0.5 + 1e-9);
    CHECK_NEAR(gray(2, 0), 0.114 * 255.0, 0.5 + 1e-9);
  }

  SUBCASE("corrupt png") {
    write_bytes(dir / "bad.png", "\x89PNG\r\n\x1a\nnot really");
    CHECK_THROWS_AS(load_image(dir / "bad.png"), FormatError);
  }
}

TEST_CASE("normalize") {
  auto img = random_image(9, 7, 1);
  for (double& v : img.values()) v *= 200.0;
  const auto n = normalize(img);
  CHECK(*std::max_element(n.values().begin(), n.values().end()) == 1.0);
  for (double v : n.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(normalize(n) == n);
  CHECK_THROWS_AS(normalize(GrayImage(4, 4)), DegenerateInputError);
}

TEST_CASE("gaussian smoothing") {
  SUBCASE("kernel") {
    const auto k = gaussian_kernel(1.5);
    CHECK(k.size() == 2 * 6 + 1);
    double sum = 0.0;
    for (double w : k) sum += w;
    CHECK_NEAR(sum, 1.0, 1e-12);
    CHECK(k[6] == *std::max_element(k.begin(), k.end()));
    CHECK(k[2] == k[10]);
    CHECK(k[5] / k[6] == doctest::Approx(std::exp(-1.0 / (2 * 1.5 * 1.5))));
  }

  SUBCASE("constant image is preserved") {
    GrayImage img(11, 9);
    for (double& v : img.values()) v = 0.37;
    for (double v : gaussian_smooth(img, 2.0).values()) CHECK_NEAR(v, 0.37, 1e-12);
  }

  SUBCASE("impulse response is the outer product of the kernel") {
    GrayImage img(31, 31);
    img(15, 15) = 1.0;
    const auto k = gaussian_kernel(1.0);
    const auto out = gaussian_smooth(img, 1.0);
    const int r = 4;
    for (int y = 0; y < 31; ++y)
      for (int x = 0; x < 31; ++x) {
        const int ox = x - 15 + r, oy = y - 15 + r;
        const double expected = (ox >= 0 && ox <= 2 * r && oy >= 0 && oy <= 2 * r) ? k[ox] * k[oy] : 0.0;
        CHECK_NEAR(out(x, y), expected, 1e-15);
      }
  }

  SUBCASE("semigroup: sigma 1 twice is close to sigma sqrt(2)") {
    // Edge replication is not closed under composition, so the comparison
    // skips the 8 px border reached by the composed kernels.
    const auto img = random_image(48, 48, 2);
    const auto twice = gaussian_smooth(gaussian_smooth(img, 1.0), 1.0);
    const auto once = gaussian_smooth(img, std::sqrt(2.0));
    double worst = 0.0;
    for (int y = 8; y < 40; ++y)
      for (int x = 8; x < 40; ++x) worst = std::max(worst, std::abs(twice(x, y) - once(x, y)));
    CHECK(worst < 0.01);
  }

  SUBCASE("interior mean is preserved") {
    GrayImage img(40, 40);
    for (int y = 10; y < 30; ++y)
      for (int x = 10; x < 30; ++x) img(x, y) = 1.0;
    const auto out = gaussian_smooth(img, 2.0);
    double a = 0.0, b = 0.0;
    for (double v : img.values()) a += v;
    for (double v : out.values()) b += v;
    CHECK_NEAR(a, b, 1e-9);
  }

  CHECK_THROWS_AS(gaussian_smooth(GrayImage(5, 5), 0.0), ParameterError);
  CHECK_THROWS_AS(gaussian_kernel(-1.0), ParameterError);
}

TEST_CASE("mask files") {
  const auto dir = temp_dir("mask");
  std::mt19937_64 rng(3);
  const auto m = random_mask(13, 7, rng);
  save_mask(m, dir / "m.pgm");
  CHECK(load_mask(dir / "m.pgm") == m);

  std::ifstream in(dir / "m.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes.rfind("P5\n13 7\n255\n", 0) == 0);
  CHECK(bytes.size() == std::string("P5\n13 7\n255\n").size() + 91);

  SegmentationMask all(4, 4, 1);
  save_mask(all, dir / "all.pgm");
  CHECK(load_mask(dir / "all.pgm").count_inside() == 16);

  CHECK_THROWS_AS(save_mask(m, dir / "missing_dir" / "m.pgm"), IoError);
}

TEST_CASE("overlay") {
  const auto img = random_image(12, 10, 5);
  SUBCASE("no contour gives the gray image") {
    const auto rgb = render_overlay(img, ContourSet{});
    REQUIRE(rgb.pixels.size() == 3 * img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
      const auto g = static_cast<std::uint8_t>(std::lround(255.0 * img.values()[i]));
      CHECK(rgb.pixels[3 * i] == g);
      CHECK(rgb.pixels[3 * i + 1] == g);
      CHECK(rgb.pixels[3 * i + 2] == g);
    }
  }
  SUBCASE("contour pixels are red") {
    ContourSet c;
    c.polylines.push_back(Polyline{{{2.0, 5.0}, {9.0, 5.0}}, false});
    const auto rgb = render_overlay(img, c);
    for (int x = 2; x <= 9; ++x) {
      const std::size_t i = 3 * (5 * 12 + x);
      CHECK(rgb.pixels[i] == 255);
      CHECK(rgb.pixels[i + 1] == 0);
      CHECK(rgb.pixels[i + 2] == 0);
    }
  }
  SUBCASE("written as PNG") {
    const auto dir = temp_dir("overlay");
    const auto c = extract_contour(sdf_circle(12, 10, 6, 5, 3));
    save_overlay(img, c, dir / "o.png");
    CHECK(load_png_rgb(dir / "o.png") == render_overlay(img, c));
    CHECK_THROWS_AS(save_overlay(img, c, dir / "no" / "o.png"), IoError);
  }
}
