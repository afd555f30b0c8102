#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mrsvpr/descriptor.hpp"
#include "mrsvpr/error.hpp"

using namespace mrsvpr;

namespace {

RawFrame make_frame(std::int64_t width, std::int64_t height,
                    std::vector<double> pixels) {
  RawFrame f;
  f.width = width;
  f.height = height;
  f.pixels = std::move(pixels);
  return f;
}

RawFrame random_frame(std::int64_t width, std::int64_t height,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 255.0);
  std::vector<double> px(static_cast<std::size_t>(width * height));
  for (double& v : px) {
    v = unit(rng);
  }
  return make_frame(width, height, std::move(px));
}

DescriptorParams small_params(std::int64_t gw, std::int64_t gh,
                              std::int64_t patch) {
  DescriptorParams p;
  p.grid_width = gw;
  p.grid_height = gh;
  p.patch = patch;
  return p;
}

}  // namespace

TEST_CASE("distance is the plain sum of absolute differences") {
  // Extremes: length-768 all-zeros vs all-ones.
  const std::vector<double> zeros(768, 0.0);
  const std::vector<double> ones(768, 1.0);
  CHECK(distance(zeros, ones) == doctest::Approx(768.0).epsilon(1e-12));
  CHECK(distance(zeros, zeros) == 0.0);

  // Independent element-by-element oracle on random data.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(129);
    std::vector<double> b(129);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = unit(rng);
      b[i] = unit(rng);
    }
    double expected = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      expected += std::abs(a[i] - b[i]);
    }
    CHECK(distance(a, b) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(distance(a, b) == doctest::Approx(distance(b, a)).epsilon(1e-15));
  }
}

TEST_CASE("distance obeys metric properties") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(32);
    std::vector<double> b(32);
    std::vector<double> c(32);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = unit(rng);
      b[i] = unit(rng);
      c[i] = unit(rng);
    }
    CHECK(distance(a, b) >= 0.0);
    CHECK(distance(a, b) <= distance(a, c) + distance(c, b) + 1e-12);
  }
}

TEST_CASE("distance rejects mismatched lengths") {
  const std::vector<double> a(8, 0.0);
  const std::vector<double> b(9, 0.0);
  CHECK_THROWS_AS(distance(a, b), InputError);
}

TEST_CASE("checkerboard frame maps to alternating 0/1") {
  // 4x4 grid, 2x2 patches. Every patch sees both tones, so range scaling
  // sends the low tone to 0 and the high tone to 1.
  const DescriptorParams params = small_params(4, 4, 2);
  std::vector<double> px(16);
  for (std::int64_t y = 0; y < 4; ++y) {
    for (std::int64_t x = 0; x < 4; ++x) {
      px[y * 4 + x] = ((x + y) % 2 == 0) ? 13.0 : 201.5;
    }
  }
  const Descriptor d = preprocess(make_frame(4, 4, px), params);
  REQUIRE(d.size() == 16);
  for (std::int64_t y = 0; y < 4; ++y) {
    for (std::int64_t x = 0; x < 4; ++x) {
      const double expected = ((x + y) % 2 == 0) ? 0.0 : 1.0;
      CHECK(d[y * 4 + x] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant frames map to 0.5 everywhere") {
  const DescriptorParams params = small_params(8, 8, 4);
  const Descriptor d =
      preprocess(make_frame(64, 64, std::vector<double>(64 * 64, 42.0)),
                 params);
  for (double v : d) {
    CHECK(v == 0.5);
  }
}

TEST_CASE("preprocess output lies in [0, 1]") {
  const DescriptorParams params;  // default 32x24 grid, patch 8
  const RawFrame frame = random_frame(161, 123, 5);
  const Descriptor d = preprocess(frame, params);
  REQUIRE(static_cast<std::int64_t>(d.size()) == params.dim());
  for (double v : d) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("preprocess is idempotent at the grid size") {
  const DescriptorParams params = small_params(16, 8, 4);
  const RawFrame frame = random_frame(99, 41, 6);
  const Descriptor once = preprocess(frame, params);
  const Descriptor twice = preprocess(make_frame(16, 8, once), params);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(std::abs(once[i] - twice[i]) <= 1e-9);
  }
}

TEST_CASE("preprocess is invariant to gain and offset") {
  const DescriptorParams params = small_params(16, 16, 8);
  const RawFrame frame = random_frame(64, 64, 7);
  RawFrame scaled = frame;
  for (double& v : scaled.pixels) {
    v = 2.5 * v + 7.0;
  }
  const Descriptor a = preprocess(frame, params);
  const Descriptor b = preprocess(scaled, params);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= 1e-6);
  }
}

TEST_CASE("preprocess validates frame and grid parameters") {
  const DescriptorParams params = small_params(8, 8, 4);
  CHECK_THROWS_AS(preprocess(RawFrame{}, params), InputError);
  CHECK_THROWS_AS(
      preprocess(make_frame(4, 4, std::vector<double>(16, 1.0)), params),
      InputError);  // smaller than the grid
  CHECK_THROWS_AS(preprocess(random_frame(64, 64, 8), small_params(8, 8, 3)),
                  ConfigError);  // patch does not divide grid
  CHECK_THROWS_AS(preprocess(random_frame(64, 64, 9), small_params(0, 8, 1)),
                  ConfigError);
}

TEST_CASE("area downsampling averages whole blocks exactly") {
  // 8x4 frame onto a 4x2 grid: every output cell is the mean of a 2x2 block.
  const DescriptorParams params = small_params(4, 2, 2);
  std::vector<double> px(32);
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<double>(i);
  }
  // Disable normalization effects by checking against the normalized means.
  const Descriptor d = preprocess(make_frame(8, 4, px), params);
  std::vector<double> means(8);
  for (std::int64_t gy = 0; gy < 2; ++gy) {
    for (std::int64_t gx = 0; gx < 4; ++gx) {
      double sum = 0.0;
      for (std::int64_t y = 2 * gy; y < 2 * gy + 2; ++y) {
        for (std::int64_t x = 2 * gx; x < 2 * gx + 2; ++x) {
          sum += px[y * 8 + x];
        }
      }
      means[gy * 4 + gx] = sum / 4.0;
    }
  }
  // Apply the same per-patch range normalization to the oracle means.
  for (std::int64_t py = 0; py < 2; py += 2) {
    for (std::int64_t px_block = 0; px_block < 4; px_block += 2) {
      double lo = means[py * 4 + px_block];
      double hi = lo;
      for (std::int64_t y = py; y < py + 2; ++y) {
        for (std::int64_t x = px_block; x < px_block + 2; ++x) {
          lo = std::min(lo, means[y * 4 + x]);
          hi = std::max(hi, means[y * 4 + x]);
        }
      }
      for (std::int64_t y = py; y < py + 2; ++y) {
        for (std::int64_t x = px_block; x < px_block + 2; ++x) {
          const double expected = (means[y * 4 + x] - lo) / (hi - lo);
          CHECK(d[y * 4 + x] == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("rgb conversion uses the 0.299/0.587/0.114 luma weights") {
  const std::vector<double> rgb = {10.0, 20.0, 30.0, 0.0, 255.0, 0.0};
  const RawFrame gray = rgb_to_gray(rgb, 2, 1);
  REQUIRE(gray.pixels.size() == 2);
  CHECK(gray.pixels[0] ==
        doctest::Approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30).epsilon(1e-12));
  CHECK(gray.pixels[1] == doctest::Approx(0.587 * 255).epsilon(1e-12));
  CHECK_THROWS_AS(rgb_to_gray(rgb, 3, 1), InputError);
}
