#pragma once

#include <string>
#include <vector>

namespace ostrain {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::vector<long>> counts;

  explicit ConfusionMatrix(std::size_t classes = 0)
      : counts(classes, std::vector<long>(classes, 0)) {}

  std::size_t classes() const { return counts.size(); }
  long total() const;
  long trace() const;
  long row_sum(std::size_t k) const;
  long column_sum(std::size_t k) const;
};

struct ClassScores {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
};

struct Averaged {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

double accuracy(const ConfusionMatrix& m);

/// Per-class scores; a zero denominator yields 0.
ClassScores class_scores(const ConfusionMatrix& m);

/// Harmonic mean, 0 when both are 0.
double f1_score(double precision, double recall);

/// Unweighted mean over the classes that have at least one true sample
/// (`only_supported`) or over all classes.
Averaged class_macro(const ConfusionMatrix& m, bool only_supported);

/// Micro-averaged precision/recall/F1. With one label per sample all three
/// equal the accuracy.
Averaged micro_average(const ConfusionMatrix& m);

ConfusionMatrix confusion_from(const std::vector<int>& truth, const std::vector<int>& predicted,
                               std::size_t classes);

}  // namespace ostrain
