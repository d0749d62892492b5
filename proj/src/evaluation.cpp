#include "ostrain/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "ostrain/error.hpp"
#include "ostrain/parallel.hpp"

namespace ostrain {

std::string to_string(Protocol p) { return p == Protocol::kLoso ? "LOSO" : "LOVO"; }

Protocol parse_protocol(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (t == "LOSO" || t == "LOSOCV") return Protocol::kLoso;
  if (t == "LOVO" || t == "LOVOCV") return Protocol::kLovo;
  throw Error(ErrorCode::kParse, "unknown protocol '" + text + "' (expected LOSO or LOVO)");
}

std::vector<Fold> make_folds(const std::vector<FeatureVector>& data, Protocol protocol) {
  std::vector<Fold> folds;
  if (protocol == Protocol::kLovo) {
    if (data.size() < 2) {
      throw Error(ErrorCode::kProtocolPrecondition, "LOVO needs at least two videos");
    }
    for (std::size_t i = 0; i < data.size(); ++i) folds.push_back({data[i].video_id, {i}});
    return folds;
  }
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < data.size(); ++i) by_subject[data[i].subject_id].push_back(i);
  if (by_subject.size() < 2) {
    throw Error(ErrorCode::kProtocolPrecondition, "LOSO needs at least two distinct subjects");
  }
  for (auto& [subject, indices] : by_subject) folds.push_back({subject, std::move(indices)});
  return folds;
}

EvalReport summarize(Protocol protocol, std::vector<std::string> classes,
                     std::vector<Fold> folds, std::vector<Prediction> predictions) {
  EvalReport r;
  r.protocol = protocol;
  r.classes = std::move(classes);
  r.folds = std::move(folds);
  r.predictions = std::move(predictions);

  auto index_of = [&](const std::string& label) {
    const auto it = std::lower_bound(r.classes.begin(), r.classes.end(), label);
    if (it == r.classes.end() || *it != label) {
      throw Error(ErrorCode::kInvalidArgument, "unknown class '" + label + "'");
    }
    return static_cast<int>(it - r.classes.begin());
  };

  std::vector<int> truth, predicted;
  std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> per_subject;
  for (const Prediction& p : r.predictions) {
    truth.push_back(index_of(p.truth));
    predicted.push_back(index_of(p.predicted));
    auto& [st, sp] = per_subject[p.subject_id];
    st.push_back(truth.back());
    sp.push_back(predicted.back());
  }
  r.confusion = confusion_from(truth, predicted, r.classes.size());
  r.micro_accuracy = accuracy(r.confusion);
  r.per_class = class_scores(r.confusion);
  r.micro = micro_average(r.confusion);
  r.class_macro = class_macro(r.confusion, false);

  for (const auto& [subject, tp] : per_subject) {
    const ConfusionMatrix m = confusion_from(tp.first, tp.second, r.classes.size());
    SubjectResult s;
    s.subject_id = subject;
    s.samples = m.total();
    s.correct = m.trace();
    s.accuracy = accuracy(m);
    s.scores = class_macro(m, true);
    r.subjects.push_back(s);
  }
  if (!r.subjects.empty()) {
    for (const SubjectResult& s : r.subjects) {
      r.macro_accuracy += s.accuracy;
      r.subject_macro.precision += s.scores.precision;
      r.subject_macro.recall += s.scores.recall;
      r.subject_macro.f1 += s.scores.f1;
    }
    const double n = static_cast<double>(r.subjects.size());
    r.macro_accuracy /= n;
    r.subject_macro.precision /= n;
    r.subject_macro.recall /= n;
    r.subject_macro.f1 /= n;
  }
  return r;
}

namespace {

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const std::vector<std::vector<double>>& x) {
    const std::size_t dim = x.front().size();
    Standardizer s{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    for (const auto& row : x) {
      for (std::size_t k = 0; k < dim; ++k) s.mean[k] += row[k];
    }
    for (double& m : s.mean) m /= static_cast<double>(x.size());
    for (const auto& row : x) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = row[k] - s.mean[k];
        s.scale[k] += d * d;
      }
    }
    for (double& v : s.scale) {
      v = std::sqrt(v / static_cast<double>(x.size()));
      if (!(v > 0.0)) v = 1.0;
    }
    return s;
  }

  std::vector<double> apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) out[k] = (row[k] - mean[k]) / scale[k];
    return out;
  }
};

}  // namespace

EvalReport cross_validate(const std::vector<FeatureVector>& data, const EvalOptions& options) {
  if (data.empty()) throw Error(ErrorCode::kProtocolPrecondition, "empty dataset");
  const std::size_t dim = data.front().values.size();
  std::set<std::string> labels;
  for (const FeatureVector& fv : data) {
    if (fv.values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "feature length differs for " + fv.video_id);
    }
    labels.insert(fv.label);
  }
  std::vector<std::string> classes(labels.begin(), labels.end());
  std::vector<Fold> folds = make_folds(data, options.protocol);

  std::vector<Prediction> predictions(data.size());
  parallel_for(folds.size(), options.threads, [&](std::size_t f) {
    const Fold& fold = folds[f];
    std::vector<bool> held(data.size(), false);
    for (std::size_t i : fold.test_indices) held[i] = true;

    std::vector<std::vector<double>> x;
    std::vector<std::string> y;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (held[i]) continue;
      x.push_back(data[i].values);
      y.push_back(data[i].label);
    }
    if (x.empty()) {
      throw Error(ErrorCode::kProtocolPrecondition, "fold " + fold.held_out + " has no training data");
    }
    Standardizer scaler;
    if (options.standardize) {
      scaler = Standardizer::fit(x);
      for (auto& row : x) row = scaler.apply(row);
    }
    const LinearSvm model = LinearSvm::train(x, y, options.svm);
    for (std::size_t i : fold.test_indices) {
      const std::vector<double> row =
          options.standardize ? scaler.apply(data[i].values) : data[i].values;
      predictions[i] = {data[i].video_id, data[i].subject_id, data[i].label, model.predict(row),
                        static_cast<int>(f)};
    }
  });
  return summarize(options.protocol, std::move(classes), std::move(folds), std::move(predictions));
}

nlohmann::json to_json(const EvalReport& r) {
  using nlohmann::json;
  auto averaged = [](const Averaged& a) {
    return json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
  };
  json per_class = json::array();
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    per_class.push_back({{"class", r.classes[k]},
                         {"support", r.confusion.row_sum(k)},
                         {"precision", r.per_class.precision[k]},
                         {"recall", r.per_class.recall[k]},
                         {"f1", r.per_class.f1[k]}});
  }
  json subjects = json::array();
  for (const SubjectResult& s : r.subjects) {
    subjects.push_back({{"subject_id", s.subject_id},
                        {"samples", s.samples},
                        {"correct", s.correct},
                        {"accuracy", s.accuracy},
                        {"class_macro", averaged(s.scores)}});
  }
  json folds = json::array();
  for (std::size_t f = 0; f < r.folds.size(); ++f) {
    json ids = json::array();
    for (std::size_t i : r.folds[f].test_indices) ids.push_back(r.predictions[i].video_id);
    folds.push_back({{"fold", f}, {"held_out", r.folds[f].held_out}, {"test_videos", ids}});
  }
  json predictions = json::array();
  for (const Prediction& p : r.predictions) {
    predictions.push_back({{"video_id", p.video_id},
                           {"subject_id", p.subject_id},
                           {"truth", p.truth},
                           {"predicted", p.predicted},
                           {"fold", p.fold}});
  }
  return json{{"protocol", to_string(r.protocol)},
              {"classes", r.classes},
              {"samples", r.confusion.total()},
              {"confusion_matrix", r.confusion.counts},
              {"micro_accuracy", r.micro_accuracy},
              {"macro_accuracy", r.macro_accuracy},
              {"micro", averaged(r.micro)},
              {"class_macro", averaged(r.class_macro)},
              {"subject_macro", averaged(r.subject_macro)},
              {"per_class", per_class},
              {"subjects", subjects},
              {"folds", folds},
              {"predictions", predictions}};
}

std::string report_to_text(const EvalReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "protocol        " << to_string(r.protocol) << '\n'
     << "samples         " << r.confusion.total() << '\n'
     << "micro accuracy  " << r.micro_accuracy << '\n'
     << "macro accuracy  " << r.macro_accuracy << "  (mean over " << r.subjects.size()
     << " subjects)\n"
     << "class-macro     P " << r.class_macro.precision << "  R " << r.class_macro.recall
     << "  F1 " << r.class_macro.f1 << '\n'
     << "subject-macro   P " << r.subject_macro.precision << "  R " << r.subject_macro.recall
     << "  F1 " << r.subject_macro.f1 << '\n';
  std::size_t width = 0;
  for (const auto& c : r.classes) width = std::max(width, c.size());
  os << "\nconfusion (rows = truth)\n";
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << r.classes[k] << std::right;
    for (long v : r.confusion.counts[k]) os << std::setw(6) << v;
    os << '\n';
  }
  return os.str();
}

void write_report_json(const EvalReport& report, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << to_json(report).dump(2) << '\n';
}

void write_predictions_csv(const EvalReport& report, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << "fold,held_out,video_id,subject_id,truth,predicted\n";
  for (const Prediction& p : report.predictions) {
    os << p.fold << ',' << report.folds[p.fold].held_out << ',' << p.video_id << ','
       << p.subject_id << ',' << p.truth << ',' << p.predicted << '\n';
  }
}

void write_confusion_csv(const EvalReport& report, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << "truth\\predicted";
  for (const auto& c : report.classes) os << ',' << c;
  os << '\n';
  for (std::size_t k = 0; k < report.classes.size(); ++k) {
    os << report.classes[k];
    for (long v : report.confusion.counts[k]) os << ',' << v;
    os << '\n';
  }
}

}  // namespace ostrain
