#pragma once

#include <filesystem>

#include "ostrain/image.hpp"

namespace ostrain {

/// Dense motion between two frames, in pixels per frame.
struct FlowField {
  Image p;  // horizontal
  Image q;  // vertical

  int width() const { return p.width; }
  int height() const { return p.height; }
};

struct FlowParams {
  int window = 5;
  // A pixel whose 2x2 normal matrix has smallest eigenvalue below
  // `min_eigenvalue`, or condition number above `max_condition`, gets (0,0).
  double min_eigenvalue = 1e-6;
  double max_condition = 1e6;
};

/// Windowed least-squares solution of Ix*p + Iy*q + It = 0 around each pixel.
/// Spatial gradients are central differences of the mean of both frames and
/// It = f2 - f1, so the time step is one frame.
FlowField estimate_flow(const Frame& f1, const Frame& f2, const FlowParams& params = {});

// Two-plane float32 little-endian dump: int32 width, int32 height, p grid, q grid.
void write_flow_file(const FlowField& flow, const std::filesystem::path& file);
FlowField read_flow_file(const std::filesystem::path& file);

}  // namespace ostrain
