#pragma once

#include <filesystem>
#include <vector>

#include "ostrain/flow.hpp"
#include "ostrain/image.hpp"

namespace ostrain {

/// Per-pixel Lagrangian strain components and magnitude of a flow field.
/// exy and eyx are equal; both are kept so the magnitude is the plain
/// four-term root sum of squares.
struct StrainMap {
  Image exx;
  Image eyy;
  Image exy;
  Image eyx;
  Image magnitude;

  int width() const { return magnitude.width; }
  int height() const { return magnitude.height; }

  /// Zeroes every component and the magnitude at pixel index i.
  void zero_at(std::size_t i);
};

StrainMap compute_strain(const FlowField& flow);

/// F-1 strain maps for a sequence of F frames; map j comes from frames (j, j+1).
std::vector<StrainMap> strain_sequence(const FrameSequence& seq, const FlowParams& flow = {});

/// Max-normalized 8-bit grayscale dump of the magnitude.
void write_strain_image(const StrainMap& strain, const std::filesystem::path& file);

}  // namespace ostrain
