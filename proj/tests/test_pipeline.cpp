#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "ostrain/config.hpp"
#include "ostrain/error.hpp"
#include "ostrain/manifest.hpp"
#include "ostrain/pipeline.hpp"
#include "ostrain/synth.hpp"

using namespace ostrain;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

SynthSpec tiny_spec() {
  SynthSpec s;
  s.classes = 2;
  s.subjects = 2;
  s.videos_per_class = 2;
  s.width = 32;
  s.height = 32;
  return s;
}

FrameSequence ramp(int frames) {
  FrameSequence seq;
  for (int t = 0; t < frames; ++t) seq.frames.push_back(Frame(3, 3, static_cast<double>(t)));
  return seq;
}

}  // namespace

TEST_CASE("temporal resampling") {
  const FrameSequence ten = ramp(10);
  CHECK(resample_temporal(ten, 10).frames == ten.frames);

  const FrameSequence mid = resample_temporal(ramp(2), 3);
  REQUIRE(mid.length() == 3);
  CHECK(mid.frames[1].at(0, 0) == 0.5);

  const FrameSequence stretched = resample_temporal(ramp(7), 10);
  REQUIRE(stretched.length() == 10);
  for (int k = 0; k < 10; ++k) {
    CHECK(std::abs(stretched.frames[k].at(1, 1) - k * 6.0 / 9.0) <= 1e-9);
  }
  CHECK(stretched.frames.front() == ramp(7).frames.front());
  CHECK(stretched.frames.back() == ramp(7).frames.back());
  CHECK_THROWS_AS(resample_temporal(ten, 1), Error);
}

TEST_CASE("config text round trip and validation") {
  PipelineConfig c;
  c.lbptop.n_blocks = 8;
  c.rho_l = 0.1;
  c.protocol = Protocol::kLovo;
  c.noise_blocks = true;
  const PipelineConfig back = PipelineConfig::from_text(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(back.lbptop.n_blocks == 8);
  CHECK(!back.resample_enabled());
  CHECK(PipelineConfig{}.resample_enabled());

  const PipelineConfig parsed = PipelineConfig::from_text("# comment\n n_blocks = 3 \n\nrho_u=0.2\n");
  CHECK(parsed.lbptop.n_blocks == 3);
  CHECK(parsed.rho_u == 0.2);

  PipelineConfig bad;
  CHECK_THROWS_AS(bad.set("no_such_key", "1"), Error);
  CHECK_THROWS_AS(bad.set("n_blocks", "five"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_text("n_blocks 5\n"), Error);
  bad.rho_l = 0.6;
  bad.rho_u = 0.6;
  CHECK_THROWS_AS(bad.validate(), Error);
  for (const std::string& key : PipelineConfig::keys()) CHECK_NOTHROW(c.get(key));
}

TEST_CASE("feature hash follows feature-relevant keys only") {
  DatasetManifest m;
  m.records.push_back({"v", "s", "l", "/tmp/v", {}, {}});
  PipelineConfig a, b;
  b.svm_c = 1.0;
  b.threads = 4;
  b.out_dir = "elsewhere";
  CHECK(feature_hash(m, a) == feature_hash(m, b));
  b.rho_l = 0.1;
  CHECK(feature_hash(m, a) != feature_hash(m, b));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("manifests in CSV and JSON") {
  const auto dir = oracle::scratch("manifest");
  std::ofstream(dir / "m.csv") << "video_id,subject_id,label,frame_dir,onset,offset\n"
                                  "v1,s1,happy,frames/v1,2,8\n"
                                  "v2,s2,sad,/abs/v2,,\n";
  const DatasetManifest csv = read_manifest(dir / "m.csv");
  REQUIRE(csv.records.size() == 2);
  CHECK(csv.records[0].frame_dir == dir / "frames/v1");
  CHECK(csv.records[0].onset == 2);
  CHECK(csv.records[0].offset == 8);
  CHECK(csv.records[1].frame_dir == fs::path("/abs/v2"));
  CHECK(!csv.records[1].onset);

  std::ofstream(dir / "m.json")
      << R"([{"video_id":"v1","subject_id":"s1","label":"happy","frame_dir":"frames/v1","onset":2}])";
  const DatasetManifest json = read_manifest(dir / "m.json");
  REQUIRE(json.records.size() == 1);
  CHECK(json.records[0].onset == 2);
  CHECK(!json.records[0].offset);

  std::ofstream(dir / "dup.csv") << "video_id,subject_id,label,frame_dir\nv,s,a,x\nv,s,b,y\n";
  CHECK_THROWS_AS(read_manifest(dir / "dup.csv"), Error);
}

TEST_CASE("onset and offset trim the loaded clip") {
  const auto dir = oracle::scratch("trim");
  for (int i = 0; i < 6; ++i) write_frame(Frame(4, 4, i / 10.0), dir / ("f" + std::to_string(i) + ".png"));
  const FrameSequence seq = load_record({"v", "s", "l", dir, 1, 3});
  REQUIRE(seq.length() == 3);
  CHECK(seq.frames[0].at(0, 0) == doctest::Approx(std::round(25.5) / 255));
  CHECK_THROWS_AS(load_record({"v", "s", "l", dir, 2, 9}), Error);
}

TEST_CASE("synthetic generator") {
  SynthSpec spec = tiny_spec();
  const auto a = oracle::scratch("synth_a"), b = oracle::scratch("synth_b");
  const DatasetManifest ma = generate_synthetic(spec, a);
  generate_synthetic(spec, b);
  CHECK(ma.records.size() == 8);
  for (const auto& r : ma.records) {
    for (int t = 0; t < spec.frames; ++t) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%03d.png", t);
      const auto rel = fs::path("frames") / r.video_id / name;
      REQUIRE(fs::exists(a / rel));
      CHECK(slurp(a / rel) == slurp(b / rel));
    }
  }
  // In-memory clips match what lands on disk.
  const FrameSequence mem = synthesize_sequence(spec, 1, 1, 0);
  const FrameSequence disk = load_sequence(a / "frames" / mem.video_id);
  CHECK(mem.frames == disk.frames);

  SynthSpec three;
  CHECK(three.record_count() == 60);
  SynthSpec bad = spec;
  bad.classes = 5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("empty manifest fails before writing anything") {
  const auto root = oracle::scratch("empty_run");
  PipelineConfig cfg;
  cfg.out_dir = (root / "out").string();
  CHECK_THROWS_AS(run_pipeline(DatasetManifest{}, cfg), Error);
  CHECK(!fs::exists(root / "out"));
}

TEST_CASE("pipeline runs, caches and reproduces itself") {
  const auto root = oracle::scratch("run");
  const DatasetManifest m = generate_synthetic(tiny_spec(), root / "data");
  PipelineConfig cfg;
  cfg.out_dir = (root / "out1").string();
  const RunResult first = run_pipeline(m, cfg);
  CHECK(!first.from_cache);
  for (const char* f : {"osf.csv", "osw.csv", "features.csv", "report.json", "predictions.csv",
                        "confusion.csv", "config.txt", "run_meta.json"}) {
    CHECK(fs::exists(fs::path(cfg.out_dir) / f));
  }
  REQUIRE(first.features.combined.size() == 8);
  CHECK(first.features.combined[0].values.size() == 3625);
  CHECK(first.features.combined[0].video_id == m.records[0].video_id);

  const std::string report = slurp(fs::path(cfg.out_dir) / "report.json");
  const RunResult second = run_pipeline(m, cfg);
  CHECK(second.from_cache);
  CHECK(slurp(fs::path(cfg.out_dir) / "report.json") == report);

  PipelineConfig threaded = cfg;
  threaded.threads = 4;
  threaded.use_cache = false;
  threaded.out_dir = (root / "out2").string();
  run_pipeline(m, threaded);
  CHECK(slurp(fs::path(threaded.out_dir) / "features.csv") ==
        slurp(fs::path(cfg.out_dir) / "features.csv"));
  CHECK(slurp(fs::path(threaded.out_dir) / "report.json") == report);

  PipelineConfig changed = cfg;
  changed.rho_l = 0.1;
  CHECK(!run_pipeline(m, changed).from_cache);
}

TEST_CASE("broken videos are skipped or abort the run") {
  const auto root = oracle::scratch("broken");
  DatasetManifest m = generate_synthetic(tiny_spec(), root / "data");
  m.records.push_back({"missing", "s01", "brow_raise", root / "nowhere", {}, {}});
  PipelineConfig cfg;
  cfg.out_dir = (root / "out").string();
  const ExtractResult r = extract_features(m, cfg);
  CHECK(r.osf.size() == 8);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].video_id == "missing");

  cfg.abort_on_error = true;
  CHECK_THROWS_AS(extract_features(m, cfg), Error);
}
