// Command-line driver: synth, extract, evaluate, report, run.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ostrain/config.hpp"
#include "ostrain/error.hpp"
#include "ostrain/evaluation.hpp"
#include "ostrain/features.hpp"
#include "ostrain/lbptop.hpp"
#include "ostrain/manifest.hpp"
#include "ostrain/osf.hpp"
#include "ostrain/parallel.hpp"
#include "ostrain/pipeline.hpp"
#include "ostrain/strain.hpp"
#include "ostrain/synth.hpp"

namespace fs = std::filesystem;
using namespace ostrain;

namespace {

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "key = value config file");
    for (const std::string& key : PipelineConfig::keys()) {
      cmd->add_option("--" + key, values[key], "override config key '" + key + "'");
    }
  }

  PipelineConfig resolve(const CLI::App* cmd) const {
    PipelineConfig cfg = file.empty() ? PipelineConfig{} : PipelineConfig::load(file);
    for (const auto& [key, value] : values) {
      if (cmd->count("--" + key) > 0) cfg.set(key, value);
    }
    cfg.validate();
    return cfg;
  }
};

FrameSequence prepare(const ManifestRecord& rec, const PipelineConfig& cfg) {
  FrameSequence seq = load_record(rec);
  return cfg.resample_enabled() ? resample_temporal(seq, cfg.resample_length) : seq;
}

std::vector<Frame> maybe_filter(const std::vector<Frame>& frames, bool on, const PipelineConfig& cfg) {
  if (!on) return frames;
  std::vector<Frame> out;
  for (const Frame& f : frames) out.push_back(gaussian_filter(f, cfg.gaussian_size, cfg.gaussian_sigma));
  return out;
}

void run_stage(const std::string& stage, const DatasetManifest& manifest, const PipelineConfig& cfg) {
  const fs::path out = cfg.out_dir;
  fs::create_directories(out);

  if (stage == "all" || stage == "osf" || stage == "osw") {
    const ExtractResult r = extract_features(manifest, cfg);
    if (stage != "osw") write_feature_csv(r.osf, out / "osf.csv");
    if (stage != "osf") write_feature_csv(r.osw, out / "osw.csv");
    if (stage == "all") {
      write_feature_csv(r.combined, out / "features.csv");
      std::ofstream(out / "features.key", std::ios::binary) << feature_hash(manifest, cfg) << '\n';
    }
    std::cout << "extracted " << r.osf.size() << " videos (" << r.failures.size()
              << " skipped) into " << out << '\n';
    return;
  }

  const std::size_t n = manifest.records.size();
  const FlowParams flow{cfg.flow_window, cfg.min_eigenvalue, cfg.max_condition};
  std::vector<FeatureVector> lbp_rows(n);
  std::vector<bool> ok(n, false);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const ManifestRecord& rec = manifest.records[i];
    try {
      const FrameSequence seq = prepare(rec, cfg);
      if (stage == "lbptop") {
        const auto frames = maybe_filter(seq.frames, cfg.gaussian_osw, cfg);
        lbp_rows[i] = {rec.video_id, rec.subject_id, rec.label,
                       zero_noise_blocks(block_histograms(frames, cfg.lbptop), cfg.noise_blocks)
                           .values()};
        ok[i] = true;
        return;
      }
      const auto frames = maybe_filter(seq.frames, cfg.gaussian_osf, cfg);
      const fs::path dir = out / stage / rec.video_id;
      fs::create_directories(dir);
      for (std::size_t j = 0; j + 1 < frames.size(); ++j) {
        char name[32];
        const FlowField f = estimate_flow(frames[j], frames[j + 1], flow);
        if (stage == "flow") {
          std::snprintf(name, sizeof(name), "flow_%03zu.bin", j);
          write_flow_file(f, dir / name);
        } else {
          std::snprintf(name, sizeof(name), "strain_%03zu.png", j);
          write_strain_image(compute_strain(f), dir / name);
        }
      }
      ok[i] = true;
    } catch (const std::exception& e) {
      if (cfg.abort_on_error) throw;
      std::cerr << "skipping " << rec.video_id << ": " << e.what() << '\n';
    }
  });
  if (stage == "lbptop") {
    std::vector<FeatureVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (ok[i]) rows.push_back(std::move(lbp_rows[i]));
    }
    write_feature_csv(rows, out / "lbptop.csv");
  }
  std::cout << "stage " << stage << " written under " << out << '\n';
}

void print_report(const nlohmann::json& r, const std::string& plot_data) {
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "protocol        " << r.at("protocol").get<std::string>() << '\n'
            << "samples         " << r.at("samples").get<long>() << '\n'
            << "micro accuracy  " << r.at("micro_accuracy").get<double>() << '\n'
            << "macro accuracy  " << r.at("macro_accuracy").get<double>() << '\n';
  for (const char* avg : {"class_macro", "subject_macro"}) {
    const auto& a = r.at(avg);
    std::cout << std::left << std::setw(16) << avg << std::right << "P "
              << a.at("precision").get<double>() << "  R " << a.at("recall").get<double>()
              << "  F1 " << a.at("f1").get<double>() << '\n';
  }
  std::cout << "\nper class\n";
  for (const auto& c : r.at("per_class")) {
    std::cout << "  " << std::left << std::setw(16) << c.at("class").get<std::string>()
              << std::right << "P " << c.at("precision").get<double>() << "  R "
              << c.at("recall").get<double>() << "  F1 " << c.at("f1").get<double>() << '\n';
  }
  std::cout << "\nconfusion (rows = truth)\n";
  const auto classes = r.at("classes").get<std::vector<std::string>>();
  const auto counts = r.at("confusion_matrix").get<std::vector<std::vector<long>>>();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::cout << "  " << std::left << std::setw(16) << classes[k] << std::right;
    for (long v : counts[k]) std::cout << std::setw(6) << v;
    std::cout << '\n';
  }
  if (!plot_data.empty()) {
    std::ofstream os(plot_data, std::ios::binary);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + plot_data);
    os << "subject_id,samples,correct,accuracy\n";
    for (const auto& s : r.at("subjects")) {
      os << s.at("subject_id").get<std::string>() << ',' << s.at("samples").get<long>() << ','
         << s.at("correct").get<long>() << ',' << format_double(s.at("accuracy").get<double>())
         << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical-strain subtle-expression features and evaluation"};
  app.require_subcommand(1);

  SynthSpec synth;
  std::string synth_out = "synth";
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic micro-motion dataset");
  cmd_synth->add_option("--out", synth_out, "output directory");
  cmd_synth->add_option("--classes", synth.classes)->capture_default_str();
  cmd_synth->add_option("--subjects", synth.subjects)->capture_default_str();
  cmd_synth->add_option("--videos", synth.videos_per_class, "videos per subject and class")
      ->capture_default_str();
  cmd_synth->add_option("--width", synth.width)->capture_default_str();
  cmd_synth->add_option("--height", synth.height)->capture_default_str();
  cmd_synth->add_option("--frames", synth.frames)->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed)->capture_default_str();
  cmd_synth->add_option("--amplitude-min", synth.amplitude_min)->capture_default_str();
  cmd_synth->add_option("--amplitude-max", synth.amplitude_max)->capture_default_str();
  cmd_synth->add_option("--noise", synth.noise_sigma)->capture_default_str();

  std::string manifest_path;
  std::string stage = "all";
  ConfigFlags extract_flags;
  auto* cmd_extract = app.add_subcommand("extract", "extract features for a manifest");
  cmd_extract->add_option("--manifest", manifest_path, "JSON or CSV manifest")->required();
  cmd_extract->add_option("--stage", stage, "pipeline stage to emit")
      ->check(CLI::IsMember({"flow", "strain", "osf", "lbptop", "osw", "all"}))
      ->capture_default_str();
  extract_flags.attach(cmd_extract);

  std::string features_path;
  ConfigFlags eval_flags;
  auto* cmd_eval = app.add_subcommand("evaluate", "cross-validate a feature matrix");
  cmd_eval->add_option("--features", features_path, "feature CSV")->required();
  eval_flags.attach(cmd_eval);

  std::string report_path;
  std::string plot_data;
  auto* cmd_report = app.add_subcommand("report", "summarize a report.json");
  cmd_report->add_option("--report", report_path)->required();
  cmd_report->add_option("--plot-data", plot_data, "write per-subject accuracies as CSV");

  std::string run_manifest;
  ConfigFlags run_flags;
  auto* cmd_run = app.add_subcommand("run", "extract (or reuse cached features) and evaluate");
  cmd_run->add_option("--manifest", run_manifest, "JSON or CSV manifest")->required();
  run_flags.attach(cmd_run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_synth->parsed()) {
      const DatasetManifest m = generate_synthetic(synth, synth_out);
      std::cout << "wrote " << m.records.size() << " videos and "
                << (fs::path(synth_out) / "manifest.csv").string() << '\n';
    } else if (cmd_extract->parsed()) {
      const PipelineConfig cfg = extract_flags.resolve(cmd_extract);
      const DatasetManifest m = read_manifest(manifest_path);
      if (m.records.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest is empty");
      run_stage(stage, m, cfg);
    } else if (cmd_eval->parsed()) {
      const PipelineConfig cfg = eval_flags.resolve(cmd_eval);
      const EvalReport report = cross_validate(read_feature_csv(features_path), cfg.eval_options());
      write_report_files(report, cfg.out_dir);
      std::cout << report_to_text(report);
    } else if (cmd_report->parsed()) {
      std::ifstream is(report_path, std::ios::binary);
      if (!is) throw Error(ErrorCode::kIo, "cannot open " + report_path);
      print_report(nlohmann::json::parse(is), plot_data);
    } else if (cmd_run->parsed()) {
      const PipelineConfig cfg = run_flags.resolve(cmd_run);
      const RunResult run = run_pipeline(read_manifest(run_manifest), cfg);
      if (run.from_cache) std::cout << "reused cached features\n";
      std::cout << report_to_text(run.report);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
