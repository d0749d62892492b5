#include "ostrain/flow.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ostrain/error.hpp"

namespace ostrain {

namespace {

// Sum of `g` over a (2r+1)^2 window with edge replication.
Image box_sum(const Image& g, int r) {
  Image rows(g.width, g.height);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += g.clamped(x + i, y);
      rows.at(x, y) = acc;
    }
  }
  Image out(g.width, g.height);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += rows.clamped(x, y + i);
      out.at(x, y) = acc;
    }
  }
  return out;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4] = {};
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw Error(ErrorCode::kParse, "truncated flow file");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

}  // namespace

FlowField estimate_flow(const Frame& f1, const Frame& f2, const FlowParams& params) {
  if (!f1.same_shape(f2)) {
    throw Error(ErrorCode::kDimensionMismatch, "flow frames differ in size");
  }
  if (params.window < 3 || params.window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "flow window must be odd and >= 3");
  }
  const int w = f1.width;
  const int h = f1.height;

  Image ixx(w, h), ixy(w, h), iyy(w, h), ixt(w, h), iyt(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = 0.25 * (f1.clamped(x + 1, y) - f1.clamped(x - 1, y) +
                                f2.clamped(x + 1, y) - f2.clamped(x - 1, y));
      const double gy = 0.25 * (f1.clamped(x, y + 1) - f1.clamped(x, y - 1) +
                                f2.clamped(x, y + 1) - f2.clamped(x, y - 1));
      const double gt = f2.at(x, y) - f1.at(x, y);
      ixx.at(x, y) = gx * gx;
      ixy.at(x, y) = gx * gy;
      iyy.at(x, y) = gy * gy;
      ixt.at(x, y) = gx * gt;
      iyt.at(x, y) = gy * gt;
    }
  }
  const int r = params.window / 2;
  const Image a = box_sum(ixx, r);
  const Image b = box_sum(ixy, r);
  const Image c = box_sum(iyy, r);
  const Image d = box_sum(ixt, r);
  const Image e = box_sum(iyt, r);

  FlowField flow{Image(w, h), Image(w, h)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double sxx = a.data[i], sxy = b.data[i], syy = c.data[i];
    const double half_trace = 0.5 * (sxx + syy);
    const double disc = std::hypot(0.5 * (sxx - syy), sxy);
    const double lmin = half_trace - disc;
    const double lmax = half_trace + disc;
    if (!(lmin >= params.min_eigenvalue) || lmax > params.max_condition * lmin) continue;
    const double det = sxx * syy - sxy * sxy;
    if (!(det > 0.0)) continue;
    // [sxx sxy; sxy syy] [p q]^T = -[sxt syt]^T
    const double bx = -d.data[i];
    const double by = -e.data[i];
    const double pv = (syy * bx - sxy * by) / det;
    const double qv = (sxx * by - sxy * bx) / det;
    if (std::isfinite(pv) && std::isfinite(qv)) {
      flow.p.data[i] = pv + 0.0;  // no negative zeros
      flow.q.data[i] = qv + 0.0;
    }
  }
  return flow;
}

void write_flow_file(const FlowField& flow, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  put_u32(os, static_cast<std::uint32_t>(flow.width()));
  put_u32(os, static_cast<std::uint32_t>(flow.height()));
  for (const Image* plane : {&flow.p, &flow.q}) {
    for (double v : plane->data) put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

FlowField read_flow_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + file.string());
  const int w = static_cast<int>(get_u32(is));
  const int h = static_cast<int>(get_u32(is));
  if (w <= 0 || h <= 0 || static_cast<long long>(w) * h > (1LL << 28)) {
    throw Error(ErrorCode::kParse, "bad flow file header in " + file.string());
  }
  FlowField flow{Image(w, h), Image(w, h)};
  for (Image* plane : {&flow.p, &flow.q}) {
    for (double& v : plane->data) v = std::bit_cast<float>(get_u32(is));
  }
  return flow;
}

}  // namespace ostrain
