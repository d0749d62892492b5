#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <random>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "oracles.hpp"
#include "ostrain/error.hpp"
#include "ostrain/image.hpp"

using namespace ostrain;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("load_sequence reads frames in filename order") {
  const auto dir = oracle::scratch("seq_ok");
  for (int i = 9; i >= 0; --i) {
    Frame f(64, 64, i / 10.0);
    char name[32];
    std::snprintf(name, sizeof(name), "img_%02d.pgm", i);
    write_frame(f, dir / name);
  }
  std::ofstream(dir / "notes.txt") << "ignored";
  const FrameSequence seq = load_sequence(dir, "v", "s", "l");
  REQUIRE(seq.length() == 10);
  CHECK(seq.width() == 64);
  CHECK(seq.height() == 64);
  for (int i = 0; i < 10; ++i) {
    CHECK(seq.frames[i].at(5, 5) == doctest::Approx(std::round(i / 10.0 * 255) / 255).epsilon(1e-12));
  }
}

TEST_CASE("identical frames load as identical images") {
  const auto dir = oracle::scratch("seq_same");
  std::mt19937 rng(3);
  Frame f = oracle::random_frame(rng, 64, 64);
  for (int i = 0; i < 10; ++i) write_frame(f, dir / ("f" + std::to_string(i) + ".png"));
  const FrameSequence seq = load_sequence(dir);
  REQUIRE(seq.length() == 10);
  for (const Frame& g : seq.frames) CHECK(g == seq.frames.front());
}

TEST_CASE("load_sequence failure modes carry distinct codes") {
  CHECK(code_of([] { load_sequence(oracle::scratch("x") / "missing"); }) ==
        ErrorCode::kMissingDirectory);

  const auto one = oracle::scratch("seq_one");
  write_frame(Frame(8, 8, 0.5), one / "a.png");
  CHECK(code_of([&] { load_sequence(one); }) == ErrorCode::kSequenceTooShort);

  const auto mixed = oracle::scratch("seq_mixed");
  write_frame(Frame(8, 8, 0.5), mixed / "a.png");
  write_frame(Frame(9, 8, 0.5), mixed / "b.png");
  CHECK(code_of([&] { load_sequence(mixed); }) == ErrorCode::kDimensionMismatch);

  const auto broken = oracle::scratch("seq_broken");
  write_frame(Frame(8, 8, 0.5), broken / "a.png");
  std::ofstream(broken / "b.png") << "not an image";
  CHECK(code_of([&] { load_sequence(broken); }) == ErrorCode::kUndecodableFile);
}

TEST_CASE("color frames reduce to luma") {
  const auto dir = oracle::scratch("color");
  cv::Mat bgr(4, 4, CV_8UC3, cv::Scalar(0, 0, 255));  // pure red
  cv::imwrite((dir / "red.png").string(), bgr);
  const Frame f = read_frame(dir / "red.png");
  CHECK(f.at(0, 0) == doctest::Approx(0.299).epsilon(1e-12));
}

TEST_CASE("gaussian kernel is normalized and symmetric") {
  const auto k = gaussian_kernel_1d(5, 0.5);
  REQUIRE(k.size() == 5);
  double sum = 0;
  for (double v : k) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k[0] == k[4]);
  CHECK(k[1] == k[3]);
  CHECK_THROWS_AS(gaussian_kernel_1d(4, 0.5), Error);
  CHECK_THROWS_AS(gaussian_kernel_1d(5, 0.0), Error);
}

TEST_CASE("gaussian filter leaves a constant frame unchanged") {
  const Frame f(40, 30, 0.5);
  const Frame g = gaussian_filter(f);
  for (double v : g.data) CHECK(std::abs(v - 0.5) <= 1e-15);
}

TEST_CASE("gaussian filter of an impulse is the 2-D kernel") {
  Frame f(9, 9, 0.0);
  f.at(4, 4) = 1.0;
  const Frame g = gaussian_filter(f, 5, 0.5);
  double mass = 0;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      CHECK(std::abs(g.at(4 + dx, 4 + dy) - oracle::gaussian_2d(dx, dy, 5, 0.5)) <= 1e-12);
    }
  }
  for (double v : g.data) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.at(4, 4) == doctest::Approx(oracle::gaussian_2d(0, 0, 5, 0.5)).epsilon(1e-12));
}

TEST_CASE("gaussian filter is linear and stays in range") {
  std::mt19937 rng(5);
  const Frame a = oracle::random_frame(rng, 21, 17);
  const Frame b = oracle::random_frame(rng, 21, 17);
  Frame mix(21, 17);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.data[i] = 0.3 * a.data[i] + 0.7 * b.data[i];
  const Frame ga = gaussian_filter(a), gb = gaussian_filter(b), gm = gaussian_filter(mix);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    CHECK(std::abs(gm.data[i] - (0.3 * ga.data[i] + 0.7 * gb.data[i])) <= 1e-12);
    CHECK(gm.data[i] >= -1e-15);
    CHECK(gm.data[i] <= 1.0 + 1e-15);
  }
}

TEST_CASE("sobel responds to vertical edges only") {
  CHECK(sobel_vertical(Frame(8, 8, 0.4)).data == std::vector<double>(64, 0.0));

  Frame step(8, 8, 0.0);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) step.at(x, y) = 1.0;
  }
  const Frame s = sobel_vertical(step);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const double want = (x == 3 || x == 4) ? 4.0 : 0.0;
      CHECK(s.at(x, y) == want);
    }
  }

  Frame horizontal(8, 8, 0.0);
  for (int y = 4; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) horizontal.at(x, y) = 1.0;
  }
  CHECK(sobel_vertical(horizontal).data == std::vector<double>(64, 0.0));
}

TEST_CASE("sobel is translation equivariant away from borders") {
  std::mt19937 rng(8);
  const Frame f = oracle::random_frame(rng, 20, 20);
  Frame shifted(20, 20);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) shifted.at(x, y) = f.clamped(x - 2, y - 1);
  }
  const Frame a = sobel_vertical(f), b = sobel_vertical(shifted);
  for (int y = 4; y < 18; ++y) {
    for (int x = 4; x < 18; ++x) CHECK(b.at(x, y) == a.at(x - 2, y - 1));
  }
}

TEST_CASE("bilinear resize") {
  const Frame c = resize_bilinear(Frame(100, 80, 0.7), 50, 50);
  CHECK(c.width == 50);
  CHECK(c.height == 50);
  for (double v : c.data) CHECK(std::abs(v - 0.7) <= 1e-15);

  std::mt19937 rng(2);
  const Frame r = oracle::random_frame(rng, 13, 9);
  CHECK(resize_bilinear(r, 13, 9) == r);

  Frame ramp(2, 2);
  ramp.at(0, 0) = ramp.at(0, 1) = 0.0;
  ramp.at(1, 0) = ramp.at(1, 1) = 1.0;
  const Frame up = resize_bilinear(ramp, 4, 4);
  const double want[4] = {0.0, 0.25, 0.75, 1.0};
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) CHECK(up.at(x, y) == doctest::Approx(want[x]).epsilon(1e-15));
  }
  CHECK_THROWS_AS(resize_bilinear(r, 0, 5), Error);
}
