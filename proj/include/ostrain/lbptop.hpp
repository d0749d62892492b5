#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ostrain/image.hpp"

namespace ostrain {

enum class Plane : int { kXY = 0, kXT = 1, kYT = 2 };

inline constexpr int kPlaneCount = 3;

/// LBP-TOP_{Pxy,Pxt,Pyt,Rx,Ry,Rt} with an N x N block grid.
struct LbpTopParams {
  std::array<int, 3> neighbors{4, 4, 4};  // P per plane, indexed by Plane
  int r_x = 1;
  int r_y = 1;
  int r_t = 4;
  int n_blocks = 5;
  // 2^P keeps every code; 2^P - 1 drops the last code after counting.
  int bins_per_plane = 15;

  void validate() const;
  int codes_per_plane() const { return 1 << neighbors[0]; }
  std::size_t descriptor_length() const {
    return static_cast<std::size_t>(n_blocks) * n_blocks * kPlaneCount * bins_per_plane;
  }
};

/// Frames stacked along t; all frames share one shape.
using Volume = std::span<const Frame>;

/// LBP code of (x, y, t) on one plane. Neighbors sit on an ellipse with the
/// plane's two radii, starting on the positive first axis and turning toward
/// the negative second axis; non-integer samples are bilinearly interpolated.
/// Throws unless the point is at least the plane's radii away from the borders.
int lbp_code(Volume volume, int x, int y, int t, Plane plane, const LbpTopParams& params);

/// Per (block row, block column, plane) normalized histograms.
class BlockHistogramSet {
 public:
  BlockHistogramSet() = default;
  BlockHistogramSet(int n_blocks, int bins)
      : n_blocks_(n_blocks),
        bins_(bins),
        values_(static_cast<std::size_t>(n_blocks) * n_blocks * kPlaneCount * bins, 0.0) {}

  int n_blocks() const { return n_blocks_; }
  int bins() const { return bins_; }

  // Block indices are 0-based here: row b1 in [0,N), column b2 in [0,N).
  std::span<double> histogram(int b1, int b2, Plane d) {
    return {values_.data() + offset(b1, b2, d), static_cast<std::size_t>(bins_)};
  }
  std::span<const double> histogram(int b1, int b2, Plane d) const {
    return {values_.data() + offset(b1, b2, d), static_cast<std::size_t>(bins_)};
  }

  /// Flattened in (b1, b2, d, c) order.
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const BlockHistogramSet&, const BlockHistogramSet&) = default;

 private:
  std::size_t offset(int b1, int b2, Plane d) const {
    return ((static_cast<std::size_t>(b1) * n_blocks_ + b2) * kPlaneCount +
            static_cast<std::size_t>(d)) *
           bins_;
  }

  int n_blocks_ = 0;
  int bins_ = 0;
  std::vector<double> values_;
};

/// Block index of coordinate `v` along an axis of `extent` split into `n`
/// blocks; the remainder belongs to the last block.
int block_index(int v, int extent, int n);

/// Counts LBP codes over the central part of the volume (every pixel at least
/// r_x, r_y, r_t from the borders) per XY block and plane, then sum-normalizes.
BlockHistogramSet block_histograms(Volume volume, const LbpTopParams& params);

/// Zeroes all planes of the bottom-left and bottom-right blocks when enabled.
BlockHistogramSet zero_noise_blocks(BlockHistogramSet hists, bool enabled);

}  // namespace ostrain
