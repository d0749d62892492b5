#include "ostrain/metrics.hpp"

#include "ostrain/error.hpp"

namespace ostrain {

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts) {
    for (long v : row) t += v;
  }
  return t;
}

long ConfusionMatrix::trace() const {
  long t = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) t += counts[k][k];
  return t;
}

long ConfusionMatrix::row_sum(std::size_t k) const {
  long t = 0;
  for (long v : counts[k]) t += v;
  return t;
}

long ConfusionMatrix::column_sum(std::size_t k) const {
  long t = 0;
  for (const auto& row : counts) t += row[k];
  return t;
}

double accuracy(const ConfusionMatrix& m) {
  const long total = m.total();
  return total == 0 ? 0.0 : static_cast<double>(m.trace()) / static_cast<double>(total);
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

ClassScores class_scores(const ConfusionMatrix& m) {
  ClassScores s;
  for (std::size_t k = 0; k < m.classes(); ++k) {
    const double tp = static_cast<double>(m.counts[k][k]);
    const long predicted = m.column_sum(k);
    const long actual = m.row_sum(k);
    const double p = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    const double r = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
    s.precision.push_back(p);
    s.recall.push_back(r);
    s.f1.push_back(f1_score(p, r));
  }
  return s;
}

Averaged class_macro(const ConfusionMatrix& m, bool only_supported) {
  const ClassScores s = class_scores(m);
  Averaged avg;
  int used = 0;
  for (std::size_t k = 0; k < m.classes(); ++k) {
    if (only_supported && m.row_sum(k) == 0) continue;
    avg.precision += s.precision[k];
    avg.recall += s.recall[k];
    avg.f1 += s.f1[k];
    ++used;
  }
  if (used > 0) {
    avg.precision /= used;
    avg.recall /= used;
    avg.f1 /= used;
  }
  return avg;
}

Averaged micro_average(const ConfusionMatrix& m) {
  // Summed over classes, TP = trace and both TP+FP and TP+FN equal the total.
  const double a = accuracy(m);
  return {a, a, a};
}

ConfusionMatrix confusion_from(const std::vector<int>& truth, const std::vector<int>& predicted,
                               std::size_t classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "truth and prediction lengths differ");
  }
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= classes ||
        static_cast<std::size_t>(predicted[i]) >= classes) {
      throw Error(ErrorCode::kInvalidArgument, "class index out of range");
    }
    ++m.counts[truth[i]][predicted[i]];
  }
  return m;
}

}  // namespace ostrain
