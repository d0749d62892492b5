#include "ostrain/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ostrain/error.hpp"
#include "ostrain/features.hpp"

namespace ostrain {

namespace fs = std::filesystem;

void DatasetManifest::validate() const {
  std::set<std::string> seen;
  for (const ManifestRecord& r : records) {
    if (r.video_id.empty()) throw Error(ErrorCode::kParse, "manifest record without video_id");
    if (!seen.insert(r.video_id).second) {
      throw Error(ErrorCode::kParse, "duplicate video_id '" + r.video_id + "'");
    }
    if (r.label.empty()) throw Error(ErrorCode::kParse, "empty label for " + r.video_id);
    for (const std::string* s : {&r.video_id, &r.subject_id, &r.label}) {
      if (s->find_first_of(",\n\r\"") != std::string::npos) {
        throw Error(ErrorCode::kParse, "identifier '" + *s + "' contains a separator");
      }
    }
    if (r.onset && r.offset && *r.offset < *r.onset) {
      throw Error(ErrorCode::kParse, "offset precedes onset for " + r.video_id);
    }
  }
}

namespace {

std::optional<int> optional_index(const std::string& text, const std::string& what) {
  if (text.empty()) return std::nullopt;
  const double v = parse_double(text);
  if (v < 0 || v != std::floor(v)) throw Error(ErrorCode::kParse, what + " must be a frame index");
  return static_cast<int>(v);
}

DatasetManifest parse_json(const std::string& text, const fs::path& base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("manifest JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kParse, "manifest JSON must be an array");
  DatasetManifest m;
  for (const auto& item : doc) {
    ManifestRecord r;
    try {
      r.video_id = item.at("video_id").get<std::string>();
      r.subject_id = item.at("subject_id").get<std::string>();
      r.label = item.at("label").get<std::string>();
      r.frame_dir = base / item.at("frame_dir").get<std::string>();
      if (item.contains("onset") && !item["onset"].is_null()) r.onset = item["onset"].get<int>();
      if (item.contains("offset") && !item["offset"].is_null()) r.offset = item["offset"].get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("manifest record: ") + e.what());
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

DatasetManifest parse_csv(const std::string& text, const fs::path& base) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return {};
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_video = column("video_id"), c_subject = column("subject_id"),
            c_label = column("label"), c_dir = column("frame_dir");
  const int c_onset = column("onset"), c_offset = column("offset");
  if (c_video < 0 || c_subject < 0 || c_label < 0 || c_dir < 0) {
    throw Error(ErrorCode::kParse,
                "manifest CSV header must contain video_id,subject_id,label,frame_dir");
  }
  DatasetManifest m;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() < header.size()) {
      throw Error(ErrorCode::kParse, "manifest row has too few fields: " + line);
    }
    ManifestRecord r{f[c_video], f[c_subject], f[c_label], base / f[c_dir], {}, {}};
    if (c_onset >= 0) r.onset = optional_index(f[c_onset], "onset");
    if (c_offset >= 0) r.offset = optional_index(f[c_offset], "offset");
    m.records.push_back(std::move(r));
  }
  return m;
}

}  // namespace

DatasetManifest read_manifest(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open manifest " + file.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const fs::path base = file.parent_path();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = file.extension() == ".json" || (first != std::string::npos && text[first] == '[');
  DatasetManifest m = json ? parse_json(text, base) : parse_csv(text, base);
  m.validate();
  return m;
}

void write_manifest_csv(const DatasetManifest& manifest, const fs::path& file) {
  manifest.validate();
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << "video_id,subject_id,label,frame_dir,onset,offset\n";
  const fs::path base = file.parent_path();
  for (const ManifestRecord& r : manifest.records) {
    os << r.video_id << ',' << r.subject_id << ',' << r.label << ','
       << r.frame_dir.lexically_relative(base).generic_string() << ','
       << (r.onset ? std::to_string(*r.onset) : "") << ','
       << (r.offset ? std::to_string(*r.offset) : "") << '\n';
  }
}

FrameSequence load_record(const ManifestRecord& record) {
  FrameSequence seq = load_sequence(record.frame_dir, record.video_id, record.subject_id,
                                    record.label);
  if (record.onset || record.offset) {
    const int last = static_cast<int>(seq.frames.size()) - 1;
    const int begin = record.onset.value_or(0);
    const int end = record.offset.value_or(last);
    if (begin > last || end > last) {
      throw Error(ErrorCode::kInvalidArgument, "onset/offset beyond the frames of " + record.video_id);
    }
    seq.frames = std::vector<Frame>(seq.frames.begin() + begin, seq.frames.begin() + end + 1);
    validate_sequence(seq);
  }
  return seq;
}

FrameSequence resample_temporal(const FrameSequence& seq, int target_len) {
  if (target_len < 2) throw Error(ErrorCode::kInvalidArgument, "target length must be >= 2");
  validate_sequence(seq);
  FrameSequence out = seq;
  out.frames.clear();
  out.frames.reserve(target_len);
  const int n = static_cast<int>(seq.frames.size());
  for (int k = 0; k < target_len; ++k) {
    const double pos = static_cast<double>(k) * (n - 1) / (target_len - 1);
    const int lo = std::min(static_cast<int>(pos), n - 1);
    const int hi = std::min(lo + 1, n - 1);
    const double w = pos - lo;
    if (w == 0.0) {
      out.frames.push_back(seq.frames[lo]);
      continue;
    }
    Frame f = seq.frames[lo];
    const Frame& g = seq.frames[hi];
    for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = std::lerp(f.data[i], g.data[i], w);
    out.frames.push_back(std::move(f));
  }
  if (seq.fps > 0.0) out.fps = seq.fps * (target_len - 1) / (n - 1);
  return out;
}

}  // namespace ostrain
