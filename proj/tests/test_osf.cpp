#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ostrain/error.hpp"
#include "ostrain/osf.hpp"

using namespace ostrain;

namespace {

FrameSequence blob_sequence(int w, int h, double cy, int frames) {
  FrameSequence seq;
  for (int t = 0; t < frames; ++t) {
    Frame f(w, h, 0.4);
    const double cx = w / 2.0, y0 = cy - 0.15 * t;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = (x - cx) / 5.0, dy = (y - y0) / 3.0;
        f.at(x, y) += 0.4 * std::exp(-0.5 * (dx * dx + dy * dy));
      }
    }
    seq.frames.push_back(f);
  }
  return seq;
}

}  // namespace

TEST_CASE("clip thresholds from a band's range") {
  const auto t = ClipThresholds::from_range(0.0, 1.0, 0.05, 0.05);
  CHECK(t.t_lower == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(t.t_upper == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(!t.keeps(0.03));
  CHECK(t.keeps(0.5));
  CHECK(!t.keeps(0.97));
}

TEST_CASE("band layout gives the remainder to the bottom band") {
  const auto b = horizontal_bands(50);
  CHECK(b[0].begin == 0);
  CHECK(b[0].end == 16);
  CHECK(b[1].end == 32);
  CHECK(b[2].end == 50);
}

TEST_CASE("a constant band survives clipping") {
  const Image m(12, 9, 0.02);
  const StrainMap out = clip_by_region(oracle::strain_from_magnitude(m));
  CHECK(out.magnitude.data == m.data);
}

TEST_CASE("bands are clipped with their own thresholds") {
  Image m(10, 9);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ranges[3][2] = {{0.0, 0.01}, {0.5, 0.6}, {2.0, 3.0}};
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 10; ++x) {
      const auto& r = ranges[y / 3];
      m.at(x, y) = r[0] + (r[1] - r[0]) * u(rng);
    }
  }
  const StrainMap out = clip_by_region(oracle::strain_from_magnitude(m), 0.05, 0.05);
  const auto want = oracle::clip_by_band(m, 0.05, 0.05);
  CHECK(out.magnitude.data == want.clipped);
  const auto th = band_thresholds(oracle::strain_from_magnitude(m), 0.05, 0.05);
  for (int b = 0; b < 3; ++b) {
    CHECK(th[b].t_lower == want.bounds[b][0]);
    CHECK(th[b].t_upper == want.bounds[b][1]);
  }
  // Zeroing applies to every component so the magnitude stays consistent.
  for (std::size_t i = 0; i < out.magnitude.size(); ++i) {
    if (out.magnitude.data[i] == 0.0) CHECK(out.exx.data[i] == 0.0);
  }
}

TEST_CASE("random maps: survivors stay inside their band thresholds") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Image m = oracle::random_frame(rng, 20 + trial, 10 + 2 * trial, 0.0, 0.1);
    const auto want = oracle::clip_by_band(m, 0.05, 0.05);
    const StrainMap out = clip_by_region(oracle::strain_from_magnitude(m));
    for (int y = 0; y < m.height; ++y) {
      const auto& bounds = want.bounds[want.band_of_row[y]];
      for (int x = 0; x < m.width; ++x) {
        const double v = out.magnitude.at(x, y);
        if (v != 0.0) {
          CHECK(v >= bounds[0]);
          CHECK(v <= bounds[1]);
        }
      }
    }
  }
}

TEST_CASE("edge suppression") {
  const StrainMap uniform = oracle::strain_from_magnitude(Image(8, 8, 0.5));
  CHECK(suppress_vertical_edges(uniform, Frame(8, 8, 0.3)).magnitude.data == uniform.magnitude.data);

  Frame step(8, 8, 0.0);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) step.at(x, y) = 1.0;
  }
  const StrainMap out = suppress_vertical_edges(uniform, step);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      CHECK(out.magnitude.at(x, y) == ((x == 3 || x == 4) ? 0.0 : 0.5));
    }
  }
  const StrainMap zero = oracle::strain_from_magnitude(Image(8, 8, 0.0));
  CHECK(suppress_vertical_edges(zero, step).magnitude.data == zero.magnitude.data);
  CHECK_THROWS_AS(suppress_vertical_edges(uniform, Frame(7, 8)), Error);
}

TEST_CASE("quantile interpolates linearly") {
  CHECK(quantile({3, 1, 2, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({5}, 0.9) == 5);
  CHECK(quantile({0, 10}, 0.9) == doctest::Approx(9.0));
}

TEST_CASE("temporal mean ignores map order") {
  std::mt19937 rng(21);
  std::vector<StrainMap> maps;
  for (int i = 0; i < 5; ++i) maps.push_back(oracle::strain_from_magnitude(oracle::random_frame(rng, 6, 6)));
  const Image a = temporal_mean(maps);
  std::reverse(maps.begin(), maps.end());
  const Image b = temporal_mean(maps);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.data[i] - b.data[i]) <= 1e-15);
  CHECK_THROWS_AS(temporal_mean({}), Error);
}

TEST_CASE("max normalization") {
  CHECK(max_normalize(Image(3, 3, 0.0)).data == std::vector<double>(9, 0.0));
  Image m(2, 1);
  m.data = {0.2, 0.8};
  const Image n = max_normalize(m);
  CHECK(n.data[1] == 1.0);
  CHECK(n.data[0] == doctest::Approx(0.25));
}

TEST_CASE("static sequence gives an all-zero OSF vector") {
  FrameSequence seq;
  std::mt19937 rng(22);
  seq.frames.assign(10, oracle::random_frame(rng, 64, 64));
  const auto v = osf_vector(seq);
  REQUIRE(v.size() == 2500);
  for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("OSF vectors have fixed length and unit peak") {
  for (auto [w, h, frames] : {std::tuple{64, 64, 10}, std::tuple{37, 81, 4}, std::tuple{120, 90, 2}}) {
    const auto v = osf_vector(blob_sequence(w, h, h / 2.0, frames));
    REQUIRE(v.size() == 2500);
    const double peak = *std::max_element(v.begin(), v.end());
    CHECK(peak == 1.0);
    for (double x : v) {
      CHECK(std::isfinite(x));
      CHECK(x >= 0.0);
    }
  }
}

TEST_CASE("motion in the top band concentrates OSF mass in the top rows") {
  const auto v = osf_vector(blob_sequence(64, 64, 10.0, 10));
  double top = 0, total = 0;
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 50; ++x) {
      total += v[static_cast<std::size_t>(y) * 50 + x];
      if (y < 50 / 3) top += v[static_cast<std::size_t>(y) * 50 + x];
    }
  }
  REQUIRE(total > 0);
  CHECK(top / total >= 0.6);
}

TEST_CASE("intensity scaling keeps the OSF vector finite") {
  FrameSequence seq = blob_sequence(48, 48, 24, 5);
  for (Frame& f : seq.frames) {
    for (double& v : f.data) v *= 1e-3;
  }
  for (double x : osf_vector(seq)) CHECK(std::isfinite(x));
}
