#include <doctest.h>

#include <cstring>
#include <fstream>
#include <string>

#include "hashcoll/image.hpp"
#include "hashcoll/resample.hpp"
#include "support.hpp"

using namespace hashcoll;

namespace {

// 2x2 images encoded by Pillow. Expected samples are what Pillow itself decodes.
const unsigned char kPngRgb2x2[] = {
    137, 80,  78,  71,  13,  10,  26,  10,  0,   0,   0,   13,  73,  72,  68,  82,  0,   0,   0,   2,   0,
    0,   0,   2,   8,   2,   0,   0,   0,   253, 212, 154, 115, 0,   0,   0,   22,  73,  68,  65,  84,  120,
    156, 99,  248, 207, 192, 192, 208, 240, 159, 65,  80,  201, 248, 215, 239, 63,  0,   33,  53,  5,   214,
    254, 163, 47,  174, 0,   0,   0,   0,   73,  69,  78,  68,  174, 66,  96,  130};
const int kPngRgb2x2Pixels[4][3] = {{255, 0, 0}, {0, 128, 255}, {17, 34, 51}, {250, 251, 252}};

const unsigned char kPngRgba2x2[] = {
    137, 80,  78,  71,  13,  10, 26,  10,  0,   0,   0,   13,  73,  72,  68,  82,  0,   0,   0,  2,  0,
    0,   0,   2,   8,   6,   0,  0,   0,   114, 182, 13,  36,  0,   0,   0,   26,  73,  68,  65, 84, 120,
    156, 99,  228, 18,  145, 99, 144, 147, 147, 107, 96,  177, 177, 177, 249, 47,  39,  39,  199, 1,  0,
    24,  41,  3,   49,  104, 158, 73, 191, 0,   0,   0,   0,   73,  69,  78,  68,  174, 66,  96,  130};
const int kPngRgba2x2Pixels[4][3] = {{10, 20, 30}, {40, 50, 60}, {70, 80, 90}, {100, 110, 120}};

const unsigned char kPngGray2x2[] = {137, 80,  78, 71, 13, 10,  26, 10, 0,  0,   0,   13,  73,  72,  68,  82,
                                     0,   0,   0,  2,  0,  0,   0,  2,  8,  0,   0,   0,   0,   87,  221, 82,
                                     248, 0,   0,  0,  14, 73,  68, 65, 84, 120, 156, 99,  96,  8,   101, 88,
                                     245, 31,  0,  3,  173, 1,  255, 103, 251, 202, 9, 0, 0, 0, 0, 73, 69,
                                     78,  68,  174, 66, 96, 130};

std::vector<unsigned char> ppm_bytes(const std::string& header, std::initializer_list<int> samples, bool wide = false) {
  std::vector<unsigned char> b(header.begin(), header.end());
  for (int s : samples) {
    if (wide) b.push_back(static_cast<unsigned char>(s >> 8));
    b.push_back(static_cast<unsigned char>(s & 0xff));
  }
  return b;
}

}  // namespace

TEST_CASE("ppm decode maps bytes to byte/255") {
  const auto white = decode_image(ppm_bytes("P6\n1 1\n255\n", {255, 255, 255}));
  REQUIRE(white.height() == 1);
  REQUIRE(white.width() == 1);
  for (int ch = 0; ch < 3; ++ch) CHECK(white.at(0, 0, ch) == 1.0);
  const auto black = decode_image(ppm_bytes("P6\n1 1\n255\n", {0, 0, 0}));
  for (int ch = 0; ch < 3; ++ch) CHECK(black.at(0, 0, ch) == 0.0);
  const auto mid = decode_image(ppm_bytes("P6 # comment\n2 1 255\n", {1, 2, 3, 4, 5, 6}));
  CHECK(mid.width() == 2);
  CHECK(mid.at(0, 1, 2) == 6.0 / 255.0);
}

TEST_CASE("ppm with 16-bit samples") {
  const auto img = decode_image(ppm_bytes("P6\n1 1\n65535\n", {65535, 0, 32768}, true));
  CHECK(img.at(0, 0, 0) == 1.0);
  CHECK(img.at(0, 0, 1) == 0.0);
  CHECK(img.at(0, 0, 2) == 32768.0 / 65535.0);
}

TEST_CASE("png decode agrees with a reference decoder") {
  const auto rgb = decode_image(kPngRgb2x2);
  REQUIRE(rgb.height() == 2);
  REQUIRE(rgb.width() == 2);
  for (int p = 0; p < 4; ++p) {
    for (int ch = 0; ch < 3; ++ch) CHECK(rgb.at(p / 2, p % 2, ch) == kPngRgb2x2Pixels[p][ch] / 255.0);
  }
  const auto rgba = decode_image(kPngRgba2x2);
  for (int p = 0; p < 4; ++p) {
    for (int ch = 0; ch < 3; ++ch) CHECK(rgba.at(p / 2, p % 2, ch) == kPngRgba2x2Pixels[p][ch] / 255.0);
  }
  const auto gray = decode_image(kPngGray2x2);
  const int levels[4] = {0, 85, 170, 255};
  for (int p = 0; p < 4; ++p) {
    for (int ch = 0; ch < 3; ++ch) CHECK(gray.at(p / 2, p % 2, ch) == levels[p] / 255.0);
  }
}

TEST_CASE("malformed inputs raise ImageError") {
  const unsigned char junk[] = {'G', 'I', 'F', '8', '9', 'a'};
  CHECK_THROWS_AS(decode_image(junk), ImageError);
  CHECK_THROWS_AS(decode_image(std::span<const unsigned char>(kPngRgb2x2, 40)), ImageError);
  CHECK_THROWS_AS(decode_image(ppm_bytes("P6\n2 2\n255\n", {1, 2, 3})), ImageError);
  CHECK_THROWS_AS(decode_image(ppm_bytes("P6\n0 2\n255\n", {})), ImageError);
  CHECK_THROWS_AS(decode_image(ppm_bytes("P6\n1 1\n0\n", {0, 0, 0})), ImageError);
  CHECK_THROWS_AS(load_image("/nonexistent/definitely_missing.png"), ImageError);
}

TEST_CASE("png and ppm round trips") {
  const auto dir = oracle::scratch_dir("imgcore");
  const auto img = quantize(oracle::random_rgb(5, 7, 3), 255);
  save_png(dir / "a.png", img, 8);
  save_ppm(dir / "a.ppm", img);
  CHECK(load_image(dir / "a.png").values() == img.values());
  CHECK(load_image(dir / "a.ppm").values() == img.values());

  const auto fine = oracle::random_rgb(4, 3, 9);
  save_png(dir / "b.png", fine, 16);
  const auto back = load_image(dir / "b.png");
  for (std::size_t i = 0; i < fine.size(); ++i) CHECK(std::abs(back.values()[i] - fine.values()[i]) <= 0.5 / 65535 + 1e-15);
  CHECK(is_image_path("x.PNG"));
  CHECK_FALSE(is_image_path("x.jpg"));
}

TEST_CASE("luma coefficients") {
  auto one = [](double r, double g, double b) {
    RgbImage img(1, 1);
    img.at(0, 0, 0) = r;
    img.at(0, 0, 1) = g;
    img.at(0, 0, 2) = b;
    return to_luma(img).at(0, 0);
  };
  CHECK(one(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one(1, 0, 0) == doctest::Approx(0.299).epsilon(1e-15));
  CHECK(one(0.5, 0.25, 0.125) == doctest::Approx(0.31050).epsilon(1e-12));
  const auto y = to_luma(oracle::random_rgb(9, 9, 1));
  for (double v : y.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("lanczos kernel") {
  CHECK(lanczos3(0.0) == 1.0);
  for (int k = 1; k < 4; ++k) {
    CHECK(std::abs(lanczos3(k)) < 1e-15);
    CHECK(std::abs(lanczos3(-k)) < 1e-15);
  }
  CHECK(lanczos3(3.0) == 0.0);
  CHECK(lanczos3(7.5) == 0.0);
  for (double t : {0.3, 1.1, 2.7}) {
    CHECK(lanczos3(t) == doctest::Approx(oracle::kernel(t)).epsilon(1e-14));
    CHECK(lanczos3(t) == lanczos3(-t));
  }
}

TEST_CASE("resample operator rows are normalized and in range") {
  for (std::size_t in : {1, 2, 5, 13, 64, 97, 300}) {
    for (std::size_t out : {1, 3, 8, 16, 32, 33, 128}) {
      const auto op = build_resample_operator(in, out);
      REQUIRE(op.rows().size() == out);
      for (const auto& row : op.rows()) {
        double sum = 0.0;
        for (const auto& t : row) {
          CHECK(t.index < in);
          sum += t.weight;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("equal sizes give the identity") {
  for (std::size_t n : {1, 2, 7, 16, 33}) {
    const auto m = build_resample_operator(n, n).dense();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(m[i * n + j] - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
  const auto img = oracle::random_gray(11, 6, 4);
  const auto same = lanczos_resize(img, 11, 6);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(same.values()[i] - img.values()[i]) < 1e-12);
}

TEST_CASE("operator matches the kernel-formula oracle") {
  for (auto [in, out] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {7, 3}, {5, 4}, {3, 8}, {100, 16}, {17, 17}}) {
    const auto m = build_resample_operator(in, out).dense();
    const auto o = oracle::lanczos_matrix(in, out);
    for (std::size_t i = 0; i < out; ++i) {
      for (std::size_t j = 0; j < in; ++j) CHECK(std::abs(m[i * in + j] - o[i][j]) < 1e-12);
    }
  }
  // [0,1,2,3] downsampled to two samples.
  const auto op = build_resample_operator(4, 2);
  const std::vector<double> ramp = {0, 1, 2, 3};
  std::vector<double> out(2);
  op.apply(ramp, 1, out, 1);
  const auto o = oracle::lanczos_matrix(4, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    double want = 0.0;
    for (std::size_t j = 0; j < 4; ++j) want += o[i][j] * ramp[j];
    CHECK(std::abs(out[i] - want) < 1e-12);
  }
  CHECK(out[0] < out[1]);
}

TEST_CASE("separable resize equals the dense matrix product") {
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = oracle::random_gray(7, 5, 100 + trial);
    const auto got = lanczos_resize(x, 3, 4);
    const auto want = oracle::resize(x, 3, 4);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got.values()[i] - want.values()[i]) < 1e-9);
  }
  const GrayImage ramp(4, 4, std::vector<double>{0, 1, 2, 3, 1, 2, 3, 4, 2, 3, 4, 5, 3, 4, 5, 6});
  const auto got = lanczos_resize(ramp, 2, 2);
  const auto want = oracle::resize(ramp, 2, 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(got.values()[i] - want.values()[i]) < 1e-12);
}

TEST_CASE("constants survive any resize exactly") {
  for (double c : {0.0, 0.2, 1.0 / 3.0, 1.0}) {
    const GrayImage img(37, 23, c);
    for (auto [oh, ow] : std::vector<std::pair<std::size_t, std::size_t>>{{8, 8}, {16, 17}, {32, 32}, {50, 60}}) {
      const auto out = lanczos_resize(img, oh, ow);
      for (double v : out.values()) CHECK(v == c);
    }
  }
}

TEST_CASE("resize is linear") {
  const auto x = oracle::random_gray(19, 23, 1);
  const auto y = oracle::random_gray(19, 23, 2);
  GrayImage z(19, 23);
  for (std::size_t i = 0; i < z.size(); ++i) z.values()[i] = 0.7 * x.values()[i] - 1.3 * y.values()[i];
  const auto rx = lanczos_resize(x, 8, 9), ry = lanczos_resize(y, 8, 9), rz = lanczos_resize(z, 8, 9);
  for (std::size_t i = 0; i < rz.size(); ++i) {
    CHECK(std::abs(rz.values()[i] - (0.7 * rx.values()[i] - 1.3 * ry.values()[i])) < 1e-9);
  }
}

TEST_CASE("adjoint satisfies the dot-product identity") {
  const Resizer rz(29, 41, 16, 17);
  const auto x = oracle::random_gray(29, 41, 5);
  const auto g = oracle::random_gray(16, 17, 6);
  const auto fx = rz.forward(x);
  const auto atg = rz.adjoint(g);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) lhs += fx.values()[i] * g.values()[i];
  for (std::size_t i = 0; i < x.size(); ++i) rhs += x.values()[i] * atg.values()[i];
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("parallel and serial resize agree bit for bit") {
  const Resizer rz(301, 257, 32, 32);
  const auto x = oracle::random_gray(301, 257, 8);
  const auto a = kernels::resize_serial(rz, x);
  const auto b = kernels::resize_parallel(rz, x);
  const auto c = rz.forward(x);
  CHECK(a.values() == b.values());
  CHECK(a.values() == c.values());
}

TEST_CASE("quantize and clamp") {
  RgbImage img(1, 2);
  img.values() = {0.5, 1.2, -0.1, 0.999, 0.001, 0.25};
  const auto q = quantize(img, 255);
  CHECK(q.values()[0] == 128.0 / 255.0);
  CHECK(q.values()[1] == 1.0);
  CHECK(q.values()[2] == 0.0);
  CHECK(clamp_unit(img).in_unit_box());
  CHECK_FALSE(img.in_unit_box());
}
