#include "ostrain/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ostrain/error.hpp"

namespace ostrain {

FeatureVector concat_features(const FeatureVector& osf, const FeatureVector& osw) {
  if (osf.video_id != osw.video_id) {
    throw Error(ErrorCode::kIdMismatch,
                "cannot concatenate features of " + osf.video_id + " and " + osw.video_id);
  }
  FeatureVector out{osf.video_id, osf.subject_id, osf.label, osw.values};
  out.values.insert(out.values.end(), osf.values.begin(), osf.values.end());
  return out;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw Error(ErrorCode::kParse, "not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_feature_csv(const std::vector<FeatureVector>& rows, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  const std::size_t dim = rows.empty() ? 0 : rows.front().values.size();
  os << "video_id,subject_id,label";
  for (std::size_t i = 0; i < dim; ++i) os << ",f" << i;
  os << '\n';
  for (const FeatureVector& r : rows) {
    if (r.values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "feature length differs for " + r.video_id);
    }
    os << r.video_id << ',' << r.subject_id << ',' << r.label;
    for (double v : r.values) os << ',' << format_double(v);
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + file.string());
}

std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + file.string());
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kParse, "empty feature file " + file.string());
  const std::size_t columns = split_csv_line(line).size();
  if (columns < 3) throw Error(ErrorCode::kParse, "feature header too short in " + file.string());

  std::vector<FeatureVector> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw Error(ErrorCode::kParse, "row has " + std::to_string(fields.size()) +
                                         " fields, expected " + std::to_string(columns));
    }
    FeatureVector fv{fields[0], fields[1], fields[2], {}};
    fv.values.reserve(columns - 3);
    for (std::size_t i = 3; i < fields.size(); ++i) {
      const double v = parse_double(fields[i]);
      if (!std::isfinite(v)) throw Error(ErrorCode::kParse, "non-finite feature in " + fv.video_id);
      fv.values.push_back(v);
    }
    rows.push_back(std::move(fv));
  }
  return rows;
}

}  // namespace ostrain
