#include "ostrain/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ostrain/error.hpp"
#include "ostrain/osf.hpp"
#include "ostrain/osw.hpp"
#include "ostrain/parallel.hpp"
#include "ostrain/strain.hpp"

namespace ostrain {

namespace fs = std::filesystem;

const std::vector<FeatureVector>& ExtractResult::select(FeatureSet set) const {
  switch (set) {
    case FeatureSet::kOsf: return osf;
    case FeatureSet::kOsw: return osw;
    case FeatureSet::kOsfOsw: break;
  }
  return combined;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Frame> filtered(const std::vector<Frame>& frames, const PipelineConfig& cfg) {
  std::vector<Frame> out;
  out.reserve(frames.size());
  for (const Frame& f : frames) out.push_back(gaussian_filter(f, cfg.gaussian_size, cfg.gaussian_sigma));
  return out;
}

struct Timed {
  VideoFeatures features;
  double load = 0.0;
  double strain = 0.0;
  double osf = 0.0;
  double osw = 0.0;
};

Timed extract_timed(const FrameSequence& input, const PipelineConfig& cfg) {
  Timed out;
  const FrameSequence* seq = &input;
  FrameSequence resampled;
  if (cfg.resample_enabled()) {
    resampled = resample_temporal(input, cfg.resample_length);
    seq = &resampled;
  }
  validate_sequence(*seq);

  auto t0 = Clock::now();
  std::optional<std::vector<Frame>> smooth;
  if (cfg.gaussian_osf || cfg.gaussian_osw) smooth = filtered(seq->frames, cfg);
  const std::vector<Frame>& osf_frames = cfg.gaussian_osf ? *smooth : seq->frames;
  const std::vector<Frame>& osw_frames = cfg.gaussian_osw ? *smooth : seq->frames;

  const FlowParams flow{cfg.flow_window, cfg.min_eigenvalue, cfg.max_condition};
  auto strain_of = [&](const std::vector<Frame>& frames) {
    FrameSequence s;
    s.video_id = seq->video_id;
    s.frames = frames;
    return strain_sequence(s, flow);
  };
  const std::vector<StrainMap> osf_maps = strain_of(osf_frames);
  std::vector<StrainMap> osw_maps_own;
  const std::vector<StrainMap>* osw_maps = &osf_maps;
  if (&osw_frames != &osf_frames) {
    osw_maps_own = strain_of(osw_frames);
    osw_maps = &osw_maps_own;
  }
  out.strain = seconds_since(t0);

  t0 = Clock::now();
  out.features.osf = {seq->video_id, seq->subject_id, seq->label,
                      osf_from_strain(osf_maps, osf_frames, cfg.osf_params())};
  out.osf = seconds_since(t0);

  t0 = Clock::now();
  out.features.osw = {seq->video_id, seq->subject_id, seq->label,
                      osw_from_strain(osw_frames, *osw_maps, cfg.osw_params())};
  out.osw = seconds_since(t0);
  return out;
}

std::string read_text(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return {};
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << text;
}

}  // namespace

VideoFeatures extract_video(const FrameSequence& seq, const PipelineConfig& config) {
  config.validate();
  return extract_timed(seq, config).features;
}

ExtractResult extract_features(const DatasetManifest& manifest, const PipelineConfig& config) {
  config.validate();
  manifest.validate();
  if (manifest.records.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest is empty");

  const std::size_t n = manifest.records.size();
  std::vector<std::optional<Timed>> results(n);
  std::vector<std::optional<std::string>> errors(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const ManifestRecord& rec = manifest.records[i];
    try {
      const auto t0 = Clock::now();
      const FrameSequence seq = load_record(rec);
      const double load = seconds_since(t0);
      results[i] = extract_timed(seq, config);
      results[i]->load = load;
    } catch (const std::exception& e) {
      if (config.abort_on_error) {
        throw Error(ErrorCode::kInvalidArgument, rec.video_id + ": " + e.what());
      }
      errors[i] = e.what();
    }
  });

  ExtractResult out;
  for (const char* stage : {"load", "strain", "osf", "osw"}) out.seconds[stage] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::cerr << "skipping " << manifest.records[i].video_id << ": " << *errors[i] << '\n';
      out.failures.push_back({manifest.records[i].video_id, *errors[i]});
      continue;
    }
    Timed& r = *results[i];
    out.seconds["load"] += r.load;
    out.seconds["strain"] += r.strain;
    out.seconds["osf"] += r.osf;
    out.seconds["osw"] += r.osw;
    out.combined.push_back(concat_features(r.features.osf, r.features.osw));
    out.osf.push_back(std::move(r.features.osf));
    out.osw.push_back(std::move(r.features.osw));
  }
  if (out.osf.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no video could be processed");
  }
  return out;
}

std::string feature_hash(const DatasetManifest& manifest, const PipelineConfig& config) {
  std::ostringstream os;
  os << config.feature_text();
  for (const ManifestRecord& r : manifest.records) {
    os << r.video_id << '|' << r.subject_id << '|' << r.label << '|'
       << r.frame_dir.generic_string() << '|' << (r.onset ? *r.onset : -1) << '|'
       << (r.offset ? *r.offset : -1) << '\n';
  }
  return fnv1a_hex(os.str());
}

void write_report_files(const EvalReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  write_report_json(report, dir / "report.json");
  write_predictions_csv(report, dir / "predictions.csv");
  write_confusion_csv(report, dir / "confusion.csv");
}

RunResult run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config) {
  config.validate();
  manifest.validate();
  if (manifest.records.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest is empty");

  const fs::path out_dir = config.out_dir;
  const std::string hash = feature_hash(manifest, config);
  const fs::path cache_key = out_dir / "features.key";

  RunResult run;
  const auto t_extract = Clock::now();
  if (config.use_cache && read_text(cache_key) == hash + "\n" &&
      fs::exists(out_dir / "osf.csv") && fs::exists(out_dir / "osw.csv") &&
      fs::exists(out_dir / "features.csv")) {
    run.features.osf = read_feature_csv(out_dir / "osf.csv");
    run.features.osw = read_feature_csv(out_dir / "osw.csv");
    run.features.combined = read_feature_csv(out_dir / "features.csv");
    run.from_cache = true;
  } else {
    run.features = extract_features(manifest, config);
    fs::create_directories(out_dir);
    write_feature_csv(run.features.osf, out_dir / "osf.csv");
    write_feature_csv(run.features.osw, out_dir / "osw.csv");
    write_feature_csv(run.features.combined, out_dir / "features.csv");
    write_text(cache_key, hash + "\n");
  }
  const double extract_seconds = seconds_since(t_extract);

  const auto t_eval = Clock::now();
  run.report = cross_validate(run.features.select(config.feature_set), config.eval_options());
  const double eval_seconds = seconds_since(t_eval);

  write_report_files(run.report, out_dir);
  config.save(out_dir / "config.txt");

  nlohmann::json meta;
  meta["config_hash"] = fnv1a_hex(config.to_text());
  meta["feature_hash"] = hash;
  meta["from_cache"] = run.from_cache;
  meta["videos"] = manifest.records.size();
  meta["feature_set"] = to_string(config.feature_set);
  meta["feature_dimension"] = run.features.select(config.feature_set).front().values.size();
  meta["seconds"] = {{"extract", extract_seconds}, {"evaluate", eval_seconds}};
  for (const auto& [stage, secs] : run.features.seconds) meta["stage_seconds"][stage] = secs;
  meta["failures"] = nlohmann::json::array();
  for (const VideoFailure& f : run.features.failures) {
    meta["failures"].push_back({{"video_id", f.video_id}, {"message", f.message}});
  }
  write_text(out_dir / "run_meta.json", meta.dump(2) + "\n");
  return run;
}

}  // namespace ostrain
