#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ostrain/image.hpp"

namespace ostrain {

struct ManifestRecord {
  std::string video_id;
  std::string subject_id;
  std::string label;
  std::filesystem::path frame_dir;  // resolved against the manifest location
  std::optional<int> onset;   // 0-based frame index, inclusive
  std::optional<int> offset;  // 0-based frame index, inclusive
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;

  /// Unique video ids, non-empty labels, ids free of separators.
  void validate() const;
};

/// Reads a JSON array of records or a CSV with header
/// video_id,subject_id,label,frame_dir[,onset,offset]. The format is chosen
/// by extension (.json) or, failing that, by the first non-blank character.
DatasetManifest read_manifest(const std::filesystem::path& file);
void write_manifest_csv(const DatasetManifest& manifest, const std::filesystem::path& file);

/// Loads the record's frames, trimmed to [onset, offset] when given.
FrameSequence load_record(const ManifestRecord& record);

/// Resamples to `target_len` frames by linear blending of the two nearest
/// source frames; endpoints map to the first and last frame.
FrameSequence resample_temporal(const FrameSequence& seq, int target_len = 10);

}  // namespace ostrain
