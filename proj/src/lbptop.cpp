#include "ostrain/lbptop.hpp"

#include <cmath>
#include <numbers>

#include "ostrain/error.hpp"

namespace ostrain {

namespace {

struct Offset {
  double a;  // along the plane's first axis
  double b;  // along the plane's second axis
};

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r + 0.0 : v;
}

std::vector<Offset> neighbor_offsets(int count, double radius_a, double radius_b) {
  std::vector<Offset> out(count);
  for (int p = 0; p < count; ++p) {
    const double theta = 2.0 * std::numbers::pi * p / count;
    out[p] = {snap(radius_a * std::cos(theta)), snap(-radius_b * std::sin(theta))};
  }
  return out;
}

std::array<int, 3> plane_radii_a(const LbpTopParams& p) { return {p.r_x, p.r_x, p.r_y}; }
std::array<int, 3> plane_radii_b(const LbpTopParams& p) { return {p.r_y, p.r_t, p.r_t}; }

// Value of the volume at a (possibly fractional) point, interpolated within
// the plane spanned by the two axes that move.
double sample(Volume vol, int x, int y, int t, Plane plane, Offset o) {
  double fa = 0.0, fb = 0.0;
  int a0 = 0, b0 = 0;
  auto split = [](double v, int& whole, double& frac) {
    const double fl = std::floor(v);
    whole = static_cast<int>(fl);
    frac = v - fl;
  };
  auto at = [&](int da, int db) {
    switch (plane) {
      case Plane::kXY: return vol[t].at(da, db);
      case Plane::kXT: return vol[db].at(da, y);
      case Plane::kYT: return vol[db].at(x, da);
    }
    return 0.0;
  };
  double ca = 0.0, cb = 0.0;
  switch (plane) {
    case Plane::kXY: ca = x + o.a; cb = y + o.b; break;
    case Plane::kXT: ca = x + o.a; cb = t + o.b; break;
    case Plane::kYT: ca = y + o.a; cb = t + o.b; break;
  }
  split(ca, a0, fa);
  split(cb, b0, fb);
  if (fa == 0.0 && fb == 0.0) return at(a0, b0);
  const double v00 = at(a0, b0);
  const double v10 = fa > 0.0 ? at(a0 + 1, b0) : v00;
  const double v01 = fb > 0.0 ? at(a0, b0 + 1) : v00;
  const double v11 = (fa > 0.0 && fb > 0.0) ? at(a0 + 1, b0 + 1) : (fa > 0.0 ? v10 : v01);
  return (1.0 - fa) * (1.0 - fb) * v00 + fa * (1.0 - fb) * v10 + (1.0 - fa) * fb * v01 +
         fa * fb * v11;
}

struct PlaneSampler {
  Plane plane;
  std::vector<Offset> offsets;
};

std::array<PlaneSampler, 3> make_samplers(const LbpTopParams& p) {
  const auto ra = plane_radii_a(p);
  const auto rb = plane_radii_b(p);
  std::array<PlaneSampler, 3> out;
  for (int d = 0; d < kPlaneCount; ++d) {
    out[d] = {static_cast<Plane>(d), neighbor_offsets(p.neighbors[d], ra[d], rb[d])};
  }
  return out;
}

int code_at(Volume vol, int x, int y, int t, const PlaneSampler& s) {
  const double center = vol[t].at(x, y);
  int code = 0;
  for (std::size_t p = 0; p < s.offsets.size(); ++p) {
    if (sample(vol, x, y, t, s.plane, s.offsets[p]) - center >= 0.0) code |= 1 << p;
  }
  return code;
}

void check_volume(Volume vol) {
  if (vol.empty()) throw Error(ErrorCode::kVolumeTooSmall, "empty volume");
  for (const Frame& f : vol) {
    if (!f.same_shape(vol.front())) {
      throw Error(ErrorCode::kDimensionMismatch, "volume frames differ in size");
    }
  }
}

}  // namespace

void LbpTopParams::validate() const {
  for (int p : neighbors) {
    if (p < 4 || p > 16) throw Error(ErrorCode::kInvalidArgument, "neighbor count must be in [4,16]");
    if (p != neighbors[0]) {
      throw Error(ErrorCode::kInvalidArgument, "all planes must share one neighbor count");
    }
  }
  if (r_x < 1 || r_y < 1 || r_t < 1) throw Error(ErrorCode::kInvalidArgument, "radii must be >= 1");
  if (n_blocks < 1) throw Error(ErrorCode::kInvalidArgument, "n_blocks must be >= 1");
  const int codes = codes_per_plane();
  if (bins_per_plane != codes && bins_per_plane != codes - 1) {
    throw Error(ErrorCode::kInvalidArgument, "bins_per_plane must be 2^P or 2^P - 1");
  }
}

int lbp_code(Volume volume, int x, int y, int t, Plane plane, const LbpTopParams& params) {
  check_volume(volume);
  const int d = static_cast<int>(plane);
  const int w = volume.front().width;
  const int h = volume.front().height;
  const int depth = static_cast<int>(volume.size());
  const auto ra = plane_radii_a(params);
  const auto rb = plane_radii_b(params);
  int margin_x = 0, margin_y = 0, margin_t = 0;
  switch (plane) {
    case Plane::kXY: margin_x = ra[d]; margin_y = rb[d]; break;
    case Plane::kXT: margin_x = ra[d]; margin_t = rb[d]; break;
    case Plane::kYT: margin_y = ra[d]; margin_t = rb[d]; break;
  }
  if (x < margin_x || x >= w - margin_x || y < margin_y || y >= h - margin_y ||
      t < margin_t || t >= depth - margin_t) {
    throw Error(ErrorCode::kInvalidArgument, "LBP center too close to the volume border");
  }
  const PlaneSampler s{plane, neighbor_offsets(params.neighbors[d], ra[d], rb[d])};
  return code_at(volume, x, y, t, s);
}

int block_index(int v, int extent, int n) {
  const int size = extent / n;
  return std::min(v / size, n - 1);
}

BlockHistogramSet block_histograms(Volume volume, const LbpTopParams& params) {
  params.validate();
  check_volume(volume);
  const int w = volume.front().width;
  const int h = volume.front().height;
  const int depth = static_cast<int>(volume.size());
  const int n = params.n_blocks;
  if (w / n < 1 || h / n < 1) {
    throw Error(ErrorCode::kVolumeTooSmall, "more blocks than pixels along an axis");
  }
  const int x0 = params.r_x, x1 = w - params.r_x;
  const int y0 = params.r_y, y1 = h - params.r_y;
  const int t0 = params.r_t, t1 = depth - params.r_t;
  if (x0 >= x1 || y0 >= y1 || t0 >= t1) {
    throw Error(ErrorCode::kVolumeTooSmall, "central region is empty for the given radii");
  }
  // Every block row and column must own at least one central pixel.
  if (block_index(x0, w, n) != 0 || block_index(x1 - 1, w, n) != n - 1 ||
      block_index(y0, h, n) != 0 || block_index(y1 - 1, h, n) != n - 1) {
    throw Error(ErrorCode::kVolumeTooSmall, "a block has no central pixels");
  }

  const int codes = params.codes_per_plane();
  const auto samplers = make_samplers(params);
  std::vector<double> counts(static_cast<std::size_t>(n) * n * kPlaneCount * codes, 0.0);
  for (int t = t0; t < t1; ++t) {
    for (int y = y0; y < y1; ++y) {
      const int b1 = block_index(y, h, n);
      for (int x = x0; x < x1; ++x) {
        const int b2 = block_index(x, w, n);
        const std::size_t base = (static_cast<std::size_t>(b1) * n + b2) * kPlaneCount;
        for (int d = 0; d < kPlaneCount; ++d) {
          counts[(base + d) * codes + code_at(volume, x, y, t, samplers[d])] += 1.0;
        }
      }
    }
  }

  BlockHistogramSet out(n, params.bins_per_plane);
  for (int b1 = 0; b1 < n; ++b1) {
    for (int b2 = 0; b2 < n; ++b2) {
      for (int d = 0; d < kPlaneCount; ++d) {
        const std::size_t base = ((static_cast<std::size_t>(b1) * n + b2) * kPlaneCount + d) * codes;
        auto hist = out.histogram(b1, b2, static_cast<Plane>(d));
        double total = 0.0;
        for (std::size_t c = 0; c < hist.size(); ++c) {
          hist[c] = counts[base + c];
          total += hist[c];
        }
        if (total > 0.0) {
          for (double& v : hist) v /= total;
        }
      }
    }
  }
  return out;
}

BlockHistogramSet zero_noise_blocks(BlockHistogramSet hists, bool enabled) {
  if (!enabled) return hists;
  const int n = hists.n_blocks();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "noise blocks need N >= 2");
  for (int d = 0; d < kPlaneCount; ++d) {
    for (int b2 : {0, n - 1}) {
      for (double& v : hists.histogram(n - 1, b2, static_cast<Plane>(d))) v = 0.0;
    }
  }
  return hists;
}

}  // namespace ostrain
