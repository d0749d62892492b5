#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ostrain/features.hpp"
#include "ostrain/metrics.hpp"
#include "ostrain/svm.hpp"

namespace ostrain {

enum class Protocol { kLoso, kLovo };

std::string to_string(Protocol p);
Protocol parse_protocol(const std::string& text);

struct Prediction {
  std::string video_id;
  std::string subject_id;
  std::string truth;
  std::string predicted;
  int fold = 0;
};

struct Fold {
  std::string held_out;  // subject id (LOSO) or video id (LOVO)
  std::vector<std::size_t> test_indices;
};

struct SubjectResult {
  std::string subject_id;
  long samples = 0;
  long correct = 0;
  double accuracy = 0.0;
  Averaged scores;  // class-macro over the classes this subject has samples of
};

struct EvalReport {
  Protocol protocol = Protocol::kLoso;
  std::vector<std::string> classes;
  std::vector<Fold> folds;
  std::vector<Prediction> predictions;  // dataset order
  ConfusionMatrix confusion;
  double micro_accuracy = 0.0;
  double macro_accuracy = 0.0;  // unweighted mean of subject-wise accuracies
  ClassScores per_class;
  Averaged micro;
  Averaged class_macro;
  Averaged subject_macro;
  std::vector<SubjectResult> subjects;
};

struct EvalOptions {
  Protocol protocol = Protocol::kLoso;
  SvmParams svm;
  bool standardize = false;
  int threads = 1;
};

/// Fold partition: LOSO holds out every video of one subject (subjects in
/// sorted order), LOVO holds out one video at a time (dataset order).
std::vector<Fold> make_folds(const std::vector<FeatureVector>& data, Protocol protocol);

/// Aggregates metrics from finished predictions.
EvalReport summarize(Protocol protocol, std::vector<std::string> classes,
                     std::vector<Fold> folds, std::vector<Prediction> predictions);

EvalReport cross_validate(const std::vector<FeatureVector>& data, const EvalOptions& options);

nlohmann::json to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

void write_report_json(const EvalReport& report, const std::filesystem::path& file);
void write_predictions_csv(const EvalReport& report, const std::filesystem::path& file);
void write_confusion_csv(const EvalReport& report, const std::filesystem::path& file);

}  // namespace ostrain
