#include "ostrain/strain.hpp"

#include <algorithm>
#include <cmath>

#include "ostrain/error.hpp"

namespace ostrain {

namespace {

// Central difference in the interior, one-sided first-order at the borders.
double d_dx(const Image& g, int x, int y) {
  if (g.width < 2) return 0.0;
  if (x == 0) return g.at(1, y) - g.at(0, y);
  if (x == g.width - 1) return g.at(x, y) - g.at(x - 1, y);
  return 0.5 * (g.at(x + 1, y) - g.at(x - 1, y));
}

double d_dy(const Image& g, int x, int y) {
  if (g.height < 2) return 0.0;
  if (y == 0) return g.at(x, 1) - g.at(x, 0);
  if (y == g.height - 1) return g.at(x, y) - g.at(x, y - 1);
  return 0.5 * (g.at(x, y + 1) - g.at(x, y - 1));
}

}  // namespace

void StrainMap::zero_at(std::size_t i) {
  exx.data[i] = 0.0;
  eyy.data[i] = 0.0;
  exy.data[i] = 0.0;
  eyx.data[i] = 0.0;
  magnitude.data[i] = 0.0;
}

StrainMap compute_strain(const FlowField& flow) {
  if (!flow.p.same_shape(flow.q) || flow.p.size() != flow.q.size() ||
      flow.p.size() != static_cast<std::size_t>(flow.width()) * flow.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "malformed flow field");
  }
  const int w = flow.width();
  const int h = flow.height();
  StrainMap s{Image(w, h), Image(w, h), Image(w, h), Image(w, h), Image(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double du_dx = d_dx(flow.p, x, y);
      const double du_dy = d_dy(flow.p, x, y);
      const double dv_dx = d_dx(flow.q, x, y);
      const double dv_dy = d_dy(flow.q, x, y);
      const double shear = 0.5 * (du_dy + dv_dx);
      s.exx.at(x, y) = du_dx;
      s.eyy.at(x, y) = dv_dy;
      s.exy.at(x, y) = shear;
      s.eyx.at(x, y) = shear;
      s.magnitude.at(x, y) =
          std::sqrt(du_dx * du_dx + dv_dy * dv_dy + shear * shear + shear * shear);
    }
  }
  return s;
}

std::vector<StrainMap> strain_sequence(const FrameSequence& seq, const FlowParams& flow) {
  validate_sequence(seq);
  std::vector<StrainMap> maps;
  maps.reserve(seq.frames.size() - 1);
  for (std::size_t j = 0; j + 1 < seq.frames.size(); ++j) {
    maps.push_back(compute_strain(estimate_flow(seq.frames[j], seq.frames[j + 1], flow)));
  }
  return maps;
}

void write_strain_image(const StrainMap& strain, const std::filesystem::path& file) {
  const auto& m = strain.magnitude.data;
  const double peak = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  Frame img = strain.magnitude;
  if (peak > 0.0) {
    for (double& v : img.data) v /= peak;
  }
  write_frame(img, file);
}

}  // namespace ostrain
