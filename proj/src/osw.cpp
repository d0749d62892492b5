#include "ostrain/osw.hpp"

#include "ostrain/error.hpp"
#include "ostrain/osf.hpp"

namespace ostrain {

BlockGrid spatial_pool(const StrainMap& strain, int n_blocks) {
  const Image& m = strain.magnitude;
  if (n_blocks < 1 || n_blocks > std::min(m.width, m.height)) {
    throw Error(ErrorCode::kInvalidArgument, "block count exceeds strain map dimensions");
  }
  BlockGrid sums(n_blocks);
  std::vector<double> counts(sums.values.size(), 0.0);
  for (int y = 0; y < m.height; ++y) {
    const int b1 = block_index(y, m.height, n_blocks);
    for (int x = 0; x < m.width; ++x) {
      const int b2 = block_index(x, m.width, n_blocks);
      sums.at(b1, b2) += m.at(x, y);
      counts[static_cast<std::size_t>(b1) * n_blocks + b2] += 1.0;
    }
  }
  for (std::size_t i = 0; i < sums.values.size(); ++i) sums.values[i] /= counts[i];
  return sums;
}

WeightMatrix temporal_pool(const std::vector<BlockGrid>& block_means) {
  if (block_means.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to pool");
  WeightMatrix w(block_means.front().n);
  for (const BlockGrid& g : block_means) {
    if (g.n != w.n) throw Error(ErrorCode::kDimensionMismatch, "block grids differ in size");
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += g.values[i];
  }
  const double count = static_cast<double>(block_means.size());
  for (double& v : w.values) v /= count;
  return w;
}

BlockHistogramSet weight_xy_histograms(const BlockHistogramSet& hists, const WeightMatrix& w) {
  if (hists.n_blocks() != w.n) {
    throw Error(ErrorCode::kDimensionMismatch, "weight grid does not match histogram blocks");
  }
  BlockHistogramSet out = hists;
  for (int b1 = 0; b1 < w.n; ++b1) {
    for (int b2 = 0; b2 < w.n; ++b2) {
      for (double& v : out.histogram(b1, b2, Plane::kXY)) v *= w.at(b1, b2);
    }
  }
  return out;
}

std::vector<double> osw_from_strain(const std::vector<Frame>& frames,
                                    const std::vector<StrainMap>& maps, const OswParams& params) {
  const BlockHistogramSet hists =
      zero_noise_blocks(block_histograms(frames, params.lbptop), params.noise_blocks);

  const std::vector<StrainMap>* weighting = &maps;
  std::vector<StrainMap> cleaned;
  if (params.preprocess) {
    cleaned = preprocess_strain(maps, frames, params.edge_quantile, params.rho_lower,
                                params.rho_upper);
    weighting = &cleaned;
  }
  std::vector<BlockGrid> pooled;
  pooled.reserve(weighting->size());
  for (const StrainMap& m : *weighting) pooled.push_back(spatial_pool(m, params.lbptop.n_blocks));
  return weight_xy_histograms(hists, temporal_pool(pooled)).values();
}

std::vector<double> osw_vector(const FrameSequence& seq, const OswParams& params) {
  validate_sequence(seq);
  params.lbptop.validate();
  FrameSequence work = seq;
  if (params.gaussian) {
    for (Frame& f : work.frames) f = gaussian_filter(f, params.gaussian_size, params.gaussian_sigma);
  }
  return osw_from_strain(work.frames, strain_sequence(work, params.flow), params);
}

}  // namespace ostrain
