#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ostrain {

/// Row-major grid of real values. Used for frames (intensities in [0,1]),
/// flow components and strain components alike.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  /// Edge-replicated access.
  double clamped(int x, int y) const;

  std::size_t size() const { return data.size(); }
  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

using Frame = Image;

struct FrameSequence {
  std::string video_id;
  std::string subject_id;
  std::string label;
  std::vector<Frame> frames;
  double fps = 0.0;

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  std::size_t length() const { return frames.size(); }
};

/// Throws unless every frame is at least 3x3, shares one shape, and
/// the sequence holds at least two frames.
void validate_sequence(const FrameSequence& seq);

// Frame I/O. Color inputs are reduced to luma 0.299R + 0.587G + 0.114B and
// scaled to [0,1].
Frame read_frame(const std::filesystem::path& file);
void write_frame(const Frame& frame, const std::filesystem::path& file);

/// Loads every image file in `dir` in lexicographic filename order.
FrameSequence load_sequence(const std::filesystem::path& dir,
                            std::string video_id = {},
                            std::string subject_id = {},
                            std::string label = {});

std::vector<double> gaussian_kernel_1d(int size, double sigma);

/// Separable Gaussian blur with edge replication. `size` must be odd.
Frame gaussian_filter(const Frame& f, int size = 5, double sigma = 0.5);

/// Absolute response of the 3x3 Sobel mask that detects vertical edges
/// (horizontal intensity change), edge-replicated.
Frame sobel_vertical(const Frame& f);

/// Bilinear resize with pixel-center alignment and clamped borders.
Frame resize_bilinear(const Frame& f, int out_w, int out_h);

}  // namespace ostrain
