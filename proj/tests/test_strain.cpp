#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ostrain/strain.hpp"

using namespace ostrain;

namespace {

FlowField field(int w, int h, auto p_of, auto q_of) {
  FlowField f{Image(w, h), Image(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.p.at(x, y) = p_of(x, y);
      f.q.at(x, y) = q_of(x, y);
    }
  }
  return f;
}

// Raised-cosine bump with compact support of radius `radius`.
Frame bump(int w, int h, double cx, double cy, double radius) {
  Frame f(w, h, 0.3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      if (r < radius) f.at(x, y) += 0.25 * (1 + std::cos(std::numbers::pi * r / radius));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("zero flow has zero strain") {
  const StrainMap m = compute_strain({Image(10, 10), Image(10, 10)});
  for (double v : m.magnitude.data) CHECK(v == 0.0);
}

TEST_CASE("uniform stretch and shear") {
  const StrainMap stretch =
      compute_strain(field(16, 16, [](int x, int) { return 0.01 * x; }, [](int, int) { return 0.0; }));
  const StrainMap shear =
      compute_strain(field(16, 16, [](int, int y) { return 0.01 * y; }, [](int, int) { return 0.0; }));
  for (int y = 1; y < 15; ++y) {
    for (int x = 1; x < 15; ++x) {
      CHECK(stretch.exx.at(x, y) == doctest::Approx(0.01).epsilon(1e-12));
      CHECK(std::abs(stretch.eyy.at(x, y)) <= 1e-15);
      CHECK(stretch.magnitude.at(x, y) == doctest::Approx(0.01).epsilon(1e-12));
      CHECK(shear.exy.at(x, y) == doctest::Approx(0.005).epsilon(1e-12));
      CHECK(shear.eyx.at(x, y) == shear.exy.at(x, y));
      CHECK(shear.magnitude.at(x, y) == doctest::Approx(0.01 / std::numbers::sqrt2).epsilon(1e-12));
    }
  }
}

TEST_CASE("strain is linear in the flow") {
  std::mt19937 rng(12);
  FlowField f{oracle::random_frame(rng, 12, 9, -0.1, 0.1), oracle::random_frame(rng, 12, 9, -0.1, 0.1)};
  FlowField neg = f, scaled = f;
  for (double& v : neg.p.data) v = -v;
  for (double& v : neg.q.data) v = -v;
  for (double& v : scaled.p.data) v *= 3.0;
  for (double& v : scaled.q.data) v *= 3.0;
  const StrainMap a = compute_strain(f), b = compute_strain(neg), c = compute_strain(scaled);
  for (std::size_t i = 0; i < a.magnitude.size(); ++i) {
    CHECK(b.magnitude.data[i] == a.magnitude.data[i]);
    CHECK(b.exx.data[i] == -a.exx.data[i]);
    CHECK(std::abs(c.magnitude.data[i] - 3.0 * a.magnitude.data[i]) <= 1e-15);
    CHECK(a.exy.data[i] == a.eyx.data[i]);
    const double e = std::sqrt(a.exx.data[i] * a.exx.data[i] + a.eyy.data[i] * a.eyy.data[i] +
                               2 * a.exy.data[i] * a.exy.data[i]);
    CHECK(std::abs(a.magnitude.data[i] - e) <= 1e-12);
  }
}

TEST_CASE("border derivatives are one-sided") {
  const StrainMap m =
      compute_strain(field(6, 4, [](int x, int) { return 0.1 * x * x; }, [](int, int) { return 0.0; }));
  // forward difference at x=0: 0.1*(1-0); backward at x=5: 0.1*(25-16)
  CHECK(m.exx.at(0, 2) == doctest::Approx(0.1));
  CHECK(m.exx.at(5, 2) == doctest::Approx(0.9));
  CHECK(m.exx.at(2, 2) == doctest::Approx(0.4));
}

TEST_CASE("strain of a static sequence is zero everywhere") {
  FrameSequence seq;
  std::mt19937 rng(6);
  const Frame f = oracle::random_frame(rng, 24, 24);
  seq.frames.assign(10, f);
  const auto maps = strain_sequence(seq);
  REQUIRE(maps.size() == 9);
  for (const StrainMap& m : maps) {
    for (double v : m.magnitude.data) CHECK(v == 0.0);
  }
  seq.frames.resize(2);
  CHECK(strain_sequence(seq).size() == 1);
}

TEST_CASE("a moving bump strains only its neighbourhood") {
  FrameSequence seq;
  const double radius = 8.0;
  for (int t = 0; t < 5; ++t) seq.frames.push_back(bump(48, 48, 20.0 + 0.5 * t, 24.0, radius));
  const auto maps = strain_sequence(seq);
  REQUIRE(maps.size() == 4);
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const double cx = 20.0 + 0.5 * j;
    const double reach = radius + 0.5 + 2 + 1;  // motion, half window, derivative stencil
    double inside = 0, outside = 0;
    for (int y = 0; y < 48; ++y) {
      for (int x = 0; x < 48; ++x) {
        const double m = maps[j].magnitude.at(x, y);
        if (std::hypot(x - cx, y - 24.0) <= reach + 1) {
          inside = std::max(inside, m);
        } else {
          outside = std::max(outside, m);
        }
      }
    }
    CHECK(inside > 1e-3);
    CHECK(outside < 1e-3);
  }
}
