#pragma once

#include <vector>

#include "ostrain/flow.hpp"
#include "ostrain/image.hpp"
#include "ostrain/lbptop.hpp"
#include "ostrain/strain.hpp"

namespace ostrain {

/// N x N grid of per-block values, row-major with b1 (row) outer.
struct BlockGrid {
  int n = 0;
  std::vector<double> values;

  BlockGrid() = default;
  explicit BlockGrid(int blocks, double fill = 0.0)
      : n(blocks), values(static_cast<std::size_t>(blocks) * blocks, fill) {}

  double& at(int b1, int b2) { return values[static_cast<std::size_t>(b1) * n + b2]; }
  double at(int b1, int b2) const { return values[static_cast<std::size_t>(b1) * n + b2]; }

  friend bool operator==(const BlockGrid&, const BlockGrid&) = default;
};

/// Per-block strain weights of one video.
using WeightMatrix = BlockGrid;

struct OswParams {
  LbpTopParams lbptop;
  FlowParams flow;
  bool gaussian = true;
  int gaussian_size = 5;
  double gaussian_sigma = 0.5;
  bool noise_blocks = false;
  // Apply the OSF edge-suppression and clipping to the weighting strain maps.
  bool preprocess = false;
  double edge_quantile = 0.9;
  double rho_lower = 0.05;
  double rho_upper = 0.05;
};

/// Mean magnitude per block; remainder rows/columns join the last block.
BlockGrid spatial_pool(const StrainMap& strain, int n_blocks);

/// Entrywise mean over time.
WeightMatrix temporal_pool(const std::vector<BlockGrid>& block_means);

/// Scales each block's XY histogram by its weight; XT and YT are copied.
BlockHistogramSet weight_xy_histograms(const BlockHistogramSet& hists, const WeightMatrix& w);

/// OSW vector from (already filtered) frames and the strain maps of their
/// consecutive pairs.
std::vector<double> osw_from_strain(const std::vector<Frame>& frames,
                                    const std::vector<StrainMap>& maps, const OswParams& params);

std::vector<double> osw_vector(const FrameSequence& seq, const OswParams& params = {});

}  // namespace ostrain
