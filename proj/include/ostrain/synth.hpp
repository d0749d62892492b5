#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ostrain/image.hpp"
#include "ostrain/manifest.hpp"

namespace ostrain {

/// Synthetic face-like clips where each class deforms the skin around one
/// feature with its own sub-pixel motion: brow raise, mouth-corner stretch,
/// eye widening and a nose wrinkle (at most four classes).
struct SynthSpec {
  int classes = 3;
  int subjects = 4;
  int videos_per_class = 5;  // per subject
  int width = 64;
  int height = 64;
  int frames = 10;
  std::uint64_t seed = 7;
  double amplitude_min = 0.5;  // pixels at the apex
  double amplitude_max = 1.5;
  double noise_sigma = 0.01;

  void validate() const;
  int record_count() const { return classes * subjects * videos_per_class; }
};

inline constexpr int kMaxSynthClasses = 4;

const char* synth_class_name(int cls);

/// Renders one clip in memory, quantized to 8 bits like the files on disk.
FrameSequence synthesize_sequence(const SynthSpec& spec, int subject, int cls, int video);

/// Writes frames under `out_dir/frames/<video_id>/` and `out_dir/manifest.csv`.
DatasetManifest generate_synthetic(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace ostrain
