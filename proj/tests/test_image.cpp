#include <random>

#include "doctest.h"
#include "oracles/transforms.hpp"
#include "pdfscope/binary/dct.hpp"
#include "pdfscope/binary/image.hpp"
#include "support.hpp"

using namespace pdfscope;
using namespace pdfscope::binary;

TEST_SUITE("image") {
  TEST_CASE("byteplot width schedule") {
    CHECK(byteplot_width(1) == 32);
    CHECK(byteplot_width(9999) == 32);
    CHECK(byteplot_width(10000) == 64);
    CHECK(byteplot_width(29999) == 64);
    CHECK(byteplot_width(30000) == 128);
    CHECK(byteplot_width(60000) == 256);
    CHECK(byteplot_width(100000) == 384);
    CHECK(byteplot_width(200000) == 512);
    CHECK(byteplot_width(500000) == 768);
    CHECK(byteplot_width(999999) == 768);
    CHECK(byteplot_width(1000000) == 1024);
  }

  TEST_CASE("byteplot of 32 0xFF bytes") {
    const auto img = byteplot_image(Bytes(32, 0xFF));
    CHECK(img.width() == 32);
    CHECK(img.height() == 1);
    for (double p : img.pixels()) CHECK(p == 1.0);
  }

  TEST_CASE("byteplot pads the last row") {
    Bytes b(33, 0x00);
    b[0] = 0x80;
    const auto img = byteplot_image(b);
    CHECK(img.width() == 32);
    CHECK(img.height() == 2);
    CHECK(img.at(0, 0) == doctest::Approx(128.0 / 255.0));
    for (std::size_t x = 0; x < 32; ++x) CHECK(img.at(x, 1) == 0.0);
  }

  TEST_CASE("byteplot of 10000 bytes") {
    const auto img = byteplot_image(Bytes(10000, 7));
    CHECK(img.width() == 64);
    CHECK(img.height() == 157);
    CHECK(img.at(15, 156) == doctest::Approx(7.0 / 255));
    CHECK(img.at(16, 156) == 0.0);  // 10000 = 156*64 + 16
  }

  TEST_CASE("byteplot rejects empty input") {
    CHECK_THROWS_WITH_AS(byteplot_image(Bytes{}), "empty stream", DataError);
  }

  TEST_CASE("bigram counts") {
    const auto c = bigram_counts(Bytes{1, 2});
    double total = 0;
    for (double v : c) total += v;
    CHECK(total == 1.0);
    CHECK(c[1 * 256 + 2] == 1.0);
    CHECK(bigram_counts(Bytes{0, 0, 0})[0] == 2.0);
    CHECK_THROWS_WITH_AS(bigram_counts(Bytes{5}), "insufficient bytes for bigrams", DataError);
    CHECK_THROWS_AS(bigram_dct_image(Bytes{}), DataError);
  }

  TEST_CASE("bigram-dct image of [0,0,0] against the direct DCT") {
    const auto img = bigram_dct_image(Bytes{0, 0, 0});
    REQUIRE(img.width() == 256);
    REQUIRE(img.height() == 256);
    std::vector<double> m(256 * 256, 0.0);
    m[0] = std::log1p(2.0);
    auto d = oracle::dct2(m, 256, 256);
    double lo = 1e300, hi = 0;
    for (auto& v : d) {
      v = std::abs(v);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double worst = 0, top = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      worst = std::max(worst, std::abs(img.pixels()[i] - (d[i] - lo) / (hi - lo)));
      top = std::max(top, img.pixels()[i]);
    }
    CHECK(worst < 1e-9);
    CHECK(top == 1.0);
  }

  TEST_CASE("uniform bigram matrix is DC only before normalisation") {
    std::vector<double> counts(256 * 256, 5.0);
    std::vector<double> logged(counts.size(), std::log1p(5.0));
    const auto d = dct2d(logged, 256, 256);
    CHECK(d[0] == doctest::Approx(256 * std::log1p(5.0)));
    double rest = 0;
    for (std::size_t i = 1; i < d.size(); ++i) rest = std::max(rest, std::abs(d[i]));
    CHECK(rest < 1e-9);
    const auto img = bigram_dct_from_counts(counts);
    // the single non-zero coefficient becomes 1, the rest stay at 0
    CHECK(img.pixels()[0] == 1.0);
    CHECK(testing::max_abs(std::vector<double>(img.pixels().begin() + 1, img.pixels().end())) < 1e-9);
  }

  TEST_CASE("all-zero bigram matrix maps to zeros") {
    const auto img = bigram_dct_from_counts(std::vector<double>(256 * 256, 0.0));
    CHECK(testing::max_abs({img.pixels().begin(), img.pixels().end()}) == 0.0);
  }

  TEST_CASE("GrayImage validates") {
    CHECK_THROWS_AS(GrayImage(0, 1, {}), UsageError);
    CHECK_THROWS_AS(GrayImage(2, 1, {0.5}), UsageError);
    CHECK_THROWS_AS(GrayImage(1, 1, {1.5}), UsageError);
    CHECK_THROWS_AS(GrayImage(1, 1, {std::nan("")}), UsageError);
  }

  TEST_CASE("area resample preserves the mean") {
    std::mt19937_64 rng(3);
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{32, 157}, {100, 7}, {64, 64}, {3, 200}, {256, 256}}) {
      std::vector<double> px(w * h);
      for (auto& p : px) p = static_cast<double>(rng() % 1000) / 999.0;
      const GrayImage img(w, h, px);
      const auto r = img.resampled(64, 64);
      double a = 0, b = 0;
      for (double p : px) a += p;
      for (double p : r.pixels()) b += p;
      CHECK(b / (64 * 64) == doctest::Approx(a / (w * h)).epsilon(1e-12));
    }
  }

  TEST_CASE("resample of an integer block image averages blocks") {
    std::vector<double> px(128 * 128);
    for (std::size_t y = 0; y < 128; ++y)
      for (std::size_t x = 0; x < 128; ++x) px[y * 128 + x] = ((x + y) % 4) / 3.0;
    const auto r = GrayImage(128, 128, px).resampled(64, 64);
    for (std::size_t y = 0; y < 64; ++y)
      for (std::size_t x = 0; x < 64; ++x) {
        const double want = (px[2 * y * 128 + 2 * x] + px[2 * y * 128 + 2 * x + 1] + px[(2 * y + 1) * 128 + 2 * x] +
                             px[(2 * y + 1) * 128 + 2 * x + 1]) /
                            4;
        CHECK(r.at(x, y) == doctest::Approx(want).epsilon(1e-12));
      }
  }
}

TEST_SUITE("dct") {
  TEST_CASE("1-D DCT matches direct summation and inverts") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 8u, 20u, 128u}) {
      std::vector<double> x(n);
      for (auto& v : x) v = nd(rng);
      Dct dct(n);
      std::vector<double> y(n), back(n);
      dct.forward(x, y);
      CHECK(testing::max_abs_diff(y, oracle::dct1(x)) < 1e-9);
      dct.inverse(y, back);
      CHECK(testing::max_abs_diff(back, x) < 1e-9);
      std::vector<double> head(std::min<std::size_t>(n, 5));
      dct.forward_truncated(x, head);
      for (std::size_t i = 0; i < head.size(); ++i) CHECK(head[i] == doctest::Approx(y[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("2-D DCT on random 8x8 matches the O(n^4) sum") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ud(-10, 10);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(64);
      for (auto& v : x) v = ud(rng);
      const auto y = dct2d(x, 8, 8);
      CHECK(testing::max_abs_diff(y, oracle::dct2(x, 8, 8)) < 1e-9);
      CHECK(testing::max_abs_diff(idct2d(y, 8, 8), x) < 1e-9);
      CHECK(testing::max_abs_diff(oracle::idct2(y, 8, 8), x) < 1e-9);
    }
  }

  TEST_CASE("non-square 2-D DCT") {
    std::mt19937_64 rng(4);
    std::vector<double> x(6 * 10);
    for (auto& v : x) v = static_cast<double>(rng() % 100);
    CHECK(testing::max_abs_diff(dct2d(x, 6, 10), oracle::dct2(x, 6, 10)) < 1e-9);
  }

  TEST_CASE("property: orthonormal DCT preserves energy") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    std::vector<double> x(16 * 16);
    for (auto& v : x) v = nd(rng);
    const auto y = dct2d(x, 16, 16);
    double ex = 0, ey = 0;
    for (double v : x) ex += v * v;
    for (double v : y) ey += v * v;
    CHECK(ey == doctest::Approx(ex).epsilon(1e-12));
  }
}
