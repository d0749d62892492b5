#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ostrain {

struct SvmParams {
  double c = 10000.0;
  double tolerance = 1e-3;
  int max_epochs = 2000;
  double bias = 1.0;  // value of the appended constant feature; <= 0 disables it
  std::uint32_t seed = 1;
};

/// Binary L1-loss (hinge) linear SVM trained by dual coordinate descent.
/// Labels are +1 / -1.
struct BinarySvm {
  std::vector<double> w;  // includes the bias weight last when bias > 0
  double bias_value = 0.0;
  int epochs = 0;

  double decision(std::span<const double> x) const;
};

BinarySvm train_binary_svm(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y, const SvmParams& params);

/// One-vs-rest ensemble. Classes are kept in sorted order; ties between
/// scores go to the lowest class index.
class LinearSvm {
 public:
  static LinearSvm train(const std::vector<std::vector<double>>& x,
                         const std::vector<std::string>& labels, const SvmParams& params = {});

  int predict_index(std::span<const double> x) const;
  const std::string& predict(std::span<const double> x) const {
    return classes_[predict_index(x)];
  }
  std::vector<double> scores(std::span<const double> x) const;
  const std::vector<std::string>& classes() const { return classes_; }

 private:
  std::vector<std::string> classes_;
  std::vector<BinarySvm> machines_;
};

}  // namespace ostrain
