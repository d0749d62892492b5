#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ostrain/evaluation.hpp"
#include "ostrain/osf.hpp"
#include "ostrain/osw.hpp"

namespace ostrain {

enum class FeatureSet { kOsfOsw, kOsf, kOsw };

std::string to_string(FeatureSet s);
FeatureSet parse_feature_set(const std::string& text);

enum class ResampleMode { kAuto, kOn, kOff };

/// Every tunable of the extraction and evaluation pipeline. Serialized as
/// `key = value` lines; each key is also a command-line flag.
struct PipelineConfig {
  LbpTopParams lbptop;
  double rho_l = 0.05;
  double rho_u = 0.05;
  double edge_quantile = 0.9;
  int flow_window = 5;
  double min_eigenvalue = 1e-6;
  double max_condition = 1e6;
  bool gaussian_osf = true;
  bool gaussian_osw = true;
  int gaussian_size = 5;
  double gaussian_sigma = 0.5;
  bool noise_blocks = false;
  bool osw_preprocess = false;
  int osf_size = 50;
  ResampleMode resample = ResampleMode::kAuto;  // auto: on for LOSO, off for LOVO
  int resample_length = 10;
  FeatureSet feature_set = FeatureSet::kOsfOsw;
  Protocol protocol = Protocol::kLoso;
  double svm_c = 10000.0;
  double svm_tolerance = 1e-3;
  int svm_max_epochs = 2000;
  std::uint32_t svm_seed = 1;
  bool standardize = false;
  int threads = 1;
  bool abort_on_error = false;
  bool use_cache = true;
  std::string out_dir = "out";

  static const std::vector<std::string>& keys();

  /// Sets one key from its text form; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  void validate() const;

  std::string to_text() const;
  static PipelineConfig from_text(const std::string& text);
  static PipelineConfig load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  /// Keys that influence extracted features (not evaluation or output paths).
  std::string feature_text() const;

  bool resample_enabled() const {
    return resample == ResampleMode::kOn ||
           (resample == ResampleMode::kAuto && protocol == Protocol::kLoso);
  }

  OsfParams osf_params() const;
  OswParams osw_params() const;
  EvalOptions eval_options() const;
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace ostrain
