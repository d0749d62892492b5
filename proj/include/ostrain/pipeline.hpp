#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ostrain/config.hpp"
#include "ostrain/evaluation.hpp"
#include "ostrain/features.hpp"
#include "ostrain/manifest.hpp"

namespace ostrain {

struct VideoFailure {
  std::string video_id;
  std::string message;
};

struct ExtractResult {
  std::vector<FeatureVector> osf;
  std::vector<FeatureVector> osw;
  std::vector<FeatureVector> combined;  // OSW then OSF
  std::vector<VideoFailure> failures;
  std::map<std::string, double> seconds;  // per-stage wall time summed over videos

  const std::vector<FeatureVector>& select(FeatureSet set) const;
};

/// Features of one sequence (after optional resampling), sharing the strain
/// computation between OSF and OSW when both use the same frames.
struct VideoFeatures {
  FeatureVector osf;
  FeatureVector osw;
};
VideoFeatures extract_video(const FrameSequence& seq, const PipelineConfig& config);

/// Extracts every record on a worker pool. Output order follows the manifest
/// regardless of scheduling. Failures are skipped or rethrown per config.
ExtractResult extract_features(const DatasetManifest& manifest, const PipelineConfig& config);

struct RunResult {
  ExtractResult features;
  EvalReport report;
  bool from_cache = false;
};

/// extract -> evaluate, writing under config.out_dir:
///   osf.csv, osw.csv, features.csv, report.json, predictions.csv,
///   confusion.csv, config.txt, run_meta.json.
/// With use_cache, features are reloaded when the feature hash matches.
RunResult run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config);

/// Hash over the feature-relevant config keys and the manifest contents.
std::string feature_hash(const DatasetManifest& manifest, const PipelineConfig& config);

/// Writes report.json, predictions.csv, confusion.csv into `dir`.
void write_report_files(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace ostrain
