#include "ostrain/osf.hpp"

#include <algorithm>
#include <cmath>

#include "ostrain/error.hpp"

namespace ostrain {

ClipThresholds ClipThresholds::from_range(double eps_min, double eps_max, double rho_lower,
                                          double rho_upper) {
  const double range = eps_max - eps_min;
  ClipThresholds t;
  t.eps_min = eps_min;
  t.eps_max = eps_max;
  t.rho_lower = rho_lower;
  t.rho_upper = rho_upper;
  t.t_lower = eps_min + rho_lower * range;
  t.t_upper = eps_max - rho_upper * range;
  return t;
}

std::array<RowBand, 3> horizontal_bands(int height) {
  const int band = height / 3;
  return {RowBand{0, band}, RowBand{band, 2 * band}, RowBand{2 * band, height}};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return std::lerp(values[lo], values[hi], pos - static_cast<double>(lo));
}

StrainMap suppress_vertical_edges(const StrainMap& strain, const Frame& source,
                                  double edge_quantile) {
  if (!strain.magnitude.same_shape(source)) {
    throw Error(ErrorCode::kDimensionMismatch, "strain map and source frame differ in size");
  }
  if (!(edge_quantile > 0.0 && edge_quantile < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "edge quantile must lie in (0,1)");
  }
  const Frame edges = sobel_vertical(source);
  std::vector<double> nonzero;
  for (double v : edges.data) {
    if (v > 0.0) nonzero.push_back(v);
  }
  StrainMap out = strain;
  if (nonzero.empty()) return out;
  const double cut = quantile(std::move(nonzero), edge_quantile);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges.data[i] > 0.0 && edges.data[i] >= cut) out.zero_at(i);
  }
  return out;
}

std::array<ClipThresholds, 3> band_thresholds(const StrainMap& strain, double rho_lower,
                                              double rho_upper) {
  const Image& m = strain.magnitude;
  if (m.height < 3) throw Error(ErrorCode::kInvalidArgument, "clipping needs height >= 3");
  std::array<ClipThresholds, 3> out;
  const auto bands = horizontal_bands(m.height);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto first = m.data.begin() + static_cast<std::ptrdiff_t>(bands[b].begin) * m.width;
    const auto last = m.data.begin() + static_cast<std::ptrdiff_t>(bands[b].end) * m.width;
    const auto [lo, hi] = std::minmax_element(first, last);
    out[b] = ClipThresholds::from_range(*lo, *hi, rho_lower, rho_upper);
  }
  return out;
}

StrainMap clip_by_region(const StrainMap& strain, double rho_lower, double rho_upper) {
  const auto thresholds = band_thresholds(strain, rho_lower, rho_upper);
  const auto bands = horizontal_bands(strain.height());
  StrainMap out = strain;
  const int w = strain.width();
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (int y = bands[b].begin; y < bands[b].end; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!thresholds[b].keeps(out.magnitude.data[i])) out.zero_at(i);
      }
    }
  }
  return out;
}

std::vector<StrainMap> preprocess_strain(const std::vector<StrainMap>& maps,
                                         const std::vector<Frame>& sources,
                                         double edge_quantile, double rho_lower,
                                         double rho_upper) {
  if (sources.size() < maps.size()) {
    throw Error(ErrorCode::kInvalidArgument, "fewer source frames than strain maps");
  }
  std::vector<StrainMap> out;
  out.reserve(maps.size());
  for (std::size_t j = 0; j < maps.size(); ++j) {
    out.push_back(
        clip_by_region(suppress_vertical_edges(maps[j], sources[j], edge_quantile), rho_lower,
                       rho_upper));
  }
  return out;
}

Image temporal_mean(const std::vector<StrainMap>& maps) {
  if (maps.empty()) throw Error(ErrorCode::kInvalidArgument, "no strain maps to pool");
  Image acc(maps.front().width(), maps.front().height());
  for (const StrainMap& m : maps) {
    if (!m.magnitude.same_shape(acc)) {
      throw Error(ErrorCode::kDimensionMismatch, "strain maps differ in size");
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += m.magnitude.data[i];
  }
  const double n = static_cast<double>(maps.size());
  for (double& v : acc.data) v /= n;
  return acc;
}

Image max_normalize(Image m) {
  if (m.data.empty()) return m;
  const double peak = *std::max_element(m.data.begin(), m.data.end());
  if (peak > 0.0) {
    for (double& v : m.data) v /= peak;
  }
  return m;
}

std::vector<double> osf_from_strain(const std::vector<StrainMap>& maps,
                                    const std::vector<Frame>& sources, const OsfParams& params) {
  const auto cleaned = preprocess_strain(maps, sources, params.edge_quantile, params.rho_lower,
                                         params.rho_upper);
  const Image composite = max_normalize(temporal_mean(cleaned));
  // Bilinear sampling can miss the peak pixel; normalize once more so the
  // vector's maximum is exactly 1 (or the vector is all zero).
  return max_normalize(resize_bilinear(composite, params.out_width, params.out_height)).data;
}

std::vector<double> osf_vector(const FrameSequence& seq, const OsfParams& params) {
  validate_sequence(seq);
  FrameSequence work;
  const FrameSequence* src = &seq;
  if (params.gaussian) {
    work = seq;
    for (Frame& f : work.frames) f = gaussian_filter(f, params.gaussian_size, params.gaussian_sigma);
    src = &work;
  }
  return osf_from_strain(strain_sequence(*src, params.flow), src->frames, params);
}

}  // namespace ostrain
