#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ostrain {

struct FeatureVector {
  std::string video_id;
  std::string subject_id;
  std::string label;
  std::vector<double> values;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// OSW values followed by OSF values. Both must describe the same video.
FeatureVector concat_features(const FeatureVector& osf, const FeatureVector& osw);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& text);

// CSV layout: video_id,subject_id,label,f0,f1,... with one header row.
void write_feature_csv(const std::vector<FeatureVector>& rows, const std::filesystem::path& file);
std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& file);

/// Splits one CSV line; fields are not quoted.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace ostrain
