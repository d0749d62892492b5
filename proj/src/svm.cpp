#include "ostrain/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ostrain/error.hpp"

namespace ostrain {

namespace {

double dot(std::span<const double> w, std::span<const double> x, double bias, bool with_bias) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
  if (with_bias) acc += w[x.size()] * bias;
  return acc;
}

}  // namespace

double BinarySvm::decision(std::span<const double> x) const {
  const bool with_bias = bias_value > 0.0;
  if (w.size() != x.size() + (with_bias ? 1 : 0)) {
    throw Error(ErrorCode::kDimensionMismatch, "feature length does not match the model");
  }
  return dot(w, x, bias_value, with_bias);
}

BinarySvm train_binary_svm(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y, const SvmParams& params) {
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "training set is empty or labels are missing");
  }
  if (!(params.c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be positive");
  const std::size_t n = x.size();
  const std::size_t dim = x.front().size();
  const bool with_bias = params.bias > 0.0;

  BinarySvm model;
  model.bias_value = with_bias ? params.bias : 0.0;
  model.w.assign(dim + (with_bias ? 1 : 0), 0.0);

  std::vector<double> qii(n), alpha(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != dim) throw Error(ErrorCode::kDimensionMismatch, "ragged training matrix");
    double sq = with_bias ? params.bias * params.bias : 0.0;
    for (double v : x[i]) sq += v * v;
    qii[i] = sq;
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937 rng(params.seed);

  for (model.epochs = 0; model.epochs < params.max_epochs;) {
    ++model.epochs;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t idx : order) {
      const double yi = y[idx];
      const double g = yi * dot(model.w, x[idx], params.bias, with_bias) - 1.0;
      double pg = g;
      if (alpha[idx] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[idx] == params.c) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12 && qii[idx] > 0.0) {
        const double old = alpha[idx];
        alpha[idx] = std::clamp(old - g / qii[idx], 0.0, params.c);
        const double delta = (alpha[idx] - old) * yi;
        for (std::size_t k = 0; k < dim; ++k) model.w[k] += delta * x[idx][k];
        if (with_bias) model.w[dim] += delta * params.bias;
      }
    }
    if (pg_max - pg_min <= params.tolerance) break;
  }
  return model;
}

LinearSvm LinearSvm::train(const std::vector<std::vector<double>>& x,
                           const std::vector<std::string>& labels, const SvmParams& params) {
  if (x.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample and label counts differ");
  }
  LinearSvm model;
  model.classes_ = labels;
  std::sort(model.classes_.begin(), model.classes_.end());
  model.classes_.erase(std::unique(model.classes_.begin(), model.classes_.end()),
                       model.classes_.end());
  if (model.classes_.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "training set needs at least two classes");
  }
  std::vector<int> y(labels.size());
  for (const std::string& cls : model.classes_) {
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == cls ? 1 : -1;
    model.machines_.push_back(train_binary_svm(x, y, params));
  }
  return model;
}

std::vector<double> LinearSvm::scores(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(machines_.size());
  for (const BinarySvm& m : machines_) out.push_back(m.decision(x));
  return out;
}

int LinearSvm::predict_index(std::span<const double> x) const {
  const auto s = scores(x);
  int best = 0;
  for (int k = 1; k < static_cast<int>(s.size()); ++k) {
    if (s[k] > s[best]) best = k;
  }
  return best;
}

}  // namespace ostrain
