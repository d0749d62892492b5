#include "ostrain/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ostrain/error.hpp"

namespace ostrain {

namespace fs = std::filesystem;

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (classes < 2 || classes > kMaxSynthClasses) fail("synthetic data needs 2 to 4 classes");
  if (subjects < 2) fail("synthetic data needs at least 2 subjects");
  if (videos_per_class < 1) fail("videos per class must be >= 1");
  if (width < 16 || height < 16) fail("synthetic frames must be at least 16x16");
  if (frames < 2) fail("synthetic clips need at least 2 frames");
  if (!(amplitude_min >= 0.0) || !(amplitude_max >= amplitude_min)) {
    fail("amplitude range must satisfy 0 <= min <= max");
  }
  if (!(noise_sigma >= 0.0)) fail("noise sigma must be >= 0");
}

const char* synth_class_name(int cls) {
  static constexpr std::array<const char*, kMaxSynthClasses> kNames = {
      "brow_raise", "mouth_stretch", "eye_widen", "nose_wrinkle"};
  return kNames.at(static_cast<std::size_t>(cls));
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t h = mix(seed);
  for (std::uint64_t v : {a, b, c, d}) h = mix(h ^ v);
  return h;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 random bits mapped to [0,1); independent of the library's distributions.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform(rng, 0.0, 1.0);  // (0,1]
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct Blob {
  double cx, cy;  // pixels
  double sx, sy;  // standard deviations, pixels
  double contrast;
};

enum BlobId { kBrowL, kBrowR, kEyeL, kEyeR, kNose, kMouth, kBlobCount };

struct Wave {
  double fx, fy, phase, amplitude;
};

struct Appearance {
  double skin;
  std::array<Blob, kBlobCount> blobs;
  std::array<Wave, 6> texture;
};

Appearance subject_appearance(const SynthSpec& spec, int subject) {
  std::mt19937_64 rng(stream_seed(spec.seed, 1, static_cast<std::uint64_t>(subject)));
  const double w = spec.width, h = spec.height;
  Appearance a{};
  a.skin = uniform(rng, 0.50, 0.65);

  struct Template {
    double cx, cy, sx, sy, contrast;
  };
  static constexpr std::array<Template, kBlobCount> kTemplates = {{
      {0.32, 0.24, 0.080, 0.022, 0.30},  // left brow
      {0.68, 0.24, 0.080, 0.022, 0.30},  // right brow
      {0.32, 0.38, 0.055, 0.028, 0.35},  // left eye
      {0.68, 0.38, 0.055, 0.028, 0.35},  // right eye
      {0.50, 0.58, 0.035, 0.070, 0.12},  // nose
      {0.50, 0.79, 0.130, 0.028, 0.30},  // mouth
  }};
  const double face_dx = uniform(rng, -0.03, 0.03);
  const double face_dy = uniform(rng, -0.03, 0.03);
  for (int b = 0; b < kBlobCount; ++b) {
    const Template& t = kTemplates[b];
    const double size = uniform(rng, 0.85, 1.15);
    a.blobs[b] = {(t.cx + face_dx + uniform(rng, -0.01, 0.01)) * w,
                  (t.cy + face_dy + uniform(rng, -0.01, 0.01)) * h, t.sx * size * w,
                  t.sy * size * h, t.contrast * uniform(rng, 0.8, 1.2)};
  }
  // Skin texture of 8-16 cycles per face. Weak texture lets the sensor
  // noise dominate the flow of flat regions.
  for (Wave& wave : a.texture) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double cycles = uniform(rng, 8.0, 16.0);
    wave = {cycles * std::cos(angle) / w, cycles * std::sin(angle) / h,
            uniform(rng, 0.0, 2.0 * std::numbers::pi), uniform(rng, 0.06, 0.12)};
  }
  return a;
}

double intensity(const Appearance& look, double x, double y) {
  double v = look.skin;
  for (const Wave& w : look.texture) {
    v += w.amplitude * std::sin(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
  }
  for (const Blob& b : look.blobs) {
    const double dx = (x - b.cx) / b.sx;
    const double dy = (y - b.cy) / b.sy;
    v -= b.contrast * std::exp(-0.5 * (dx * dx + dy * dy));
  }
  return v;
}

double bump(double x, double y, double cx, double cy, double sx, double sy) {
  const double dx = (x - cx) / sx, dy = (y - cy) / sy;
  return std::exp(-0.5 * (dx * dx + dy * dy));
}

// Displacement (pixels) of the skin at (x, y) for the class's motion
// signature at apex scale `s`. Each field is a smooth bump around the
// facial feature, so the skin deforms instead of translating rigidly.
std::array<double, 2> displacement(const Appearance& look, int cls, double s, double x, double y) {
  constexpr double reach = 4.0;  // extent of the deformed skin, in feature widths
  const auto& b = look.blobs;
  double dx = 0.0, dy = 0.0;
  switch (cls) {
    case 0:  // brows lift
      for (BlobId id : {kBrowL, kBrowR}) {
        dy -= s * bump(x, y, b[id].cx, b[id].cy, b[id].sx * 1.2, b[id].sy * reach);
      }
      break;
    case 1:  // mouth corners pull outward
      for (double side : {-1.0, 1.0}) {
        const double cx = b[kMouth].cx + side * 1.5 * b[kMouth].sx;
        dx += side * s * bump(x, y, cx, b[kMouth].cy, b[kMouth].sy * reach, b[kMouth].sy * reach);
      }
      break;
    case 2:  // eyes widen: lids move apart vertically
      for (BlobId id : {kEyeL, kEyeR}) {
        const double g = bump(x, y, b[id].cx, b[id].cy, b[id].sx * 1.2, b[id].sy * reach);
        dy += s * g * std::clamp((y - b[id].cy) / b[id].sy, -1.0, 1.0);
      }
      break;
    case 3:  // nose wrinkles upward
      dy -= s * bump(x, y, b[kNose].cx, b[kNose].cy, b[kNose].sx * reach, b[kNose].sy);
      break;
    default:
      break;
  }
  return {dx, dy};
}

}  // namespace

FrameSequence synthesize_sequence(const SynthSpec& spec, int subject, int cls, int video) {
  spec.validate();
  if (cls < 0 || cls >= spec.classes) throw Error(ErrorCode::kInvalidArgument, "class out of range");
  const Appearance look = subject_appearance(spec, subject);
  std::mt19937_64 rng(stream_seed(spec.seed, 2, static_cast<std::uint64_t>(subject),
                                  static_cast<std::uint64_t>(cls),
                                  static_cast<std::uint64_t>(video)));
  const double amplitude = uniform(rng, spec.amplitude_min, spec.amplitude_max);
  const double brightness = uniform(rng, -0.02, 0.02);

  char id[64];
  std::snprintf(id, sizeof(id), "s%02d_%s_%02d", subject + 1, synth_class_name(cls), video + 1);
  char subject_id[16];
  std::snprintf(subject_id, sizeof(subject_id), "s%02d", subject + 1);

  FrameSequence seq;
  seq.video_id = id;
  seq.subject_id = subject_id;
  seq.label = synth_class_name(cls);
  seq.fps = 100.0;
  for (int t = 0; t < spec.frames; ++t) {
    const double phase = spec.frames > 1 ? static_cast<double>(t) / (spec.frames - 1) : 0.0;
    const double s = amplitude * std::sin(std::numbers::pi * phase);
    Frame f(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        // Backward warp: the pixel shows the skin point that moved here.
        const auto [dx, dy] = displacement(look, cls, s, x, y);
        double v = intensity(look, x - dx, y - dy) + brightness;
        v += spec.noise_sigma * normal(rng);
        f.at(x, y) = std::round(std::clamp(v, 0.0, 1.0) * 255.0) * (1.0 / 255.0);
      }
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

DatasetManifest generate_synthetic(const SynthSpec& spec, const fs::path& out_dir) {
  spec.validate();
  DatasetManifest manifest;
  const fs::path frames_root = out_dir / "frames";
  fs::create_directories(frames_root);
  for (int subject = 0; subject < spec.subjects; ++subject) {
    for (int cls = 0; cls < spec.classes; ++cls) {
      for (int video = 0; video < spec.videos_per_class; ++video) {
        const FrameSequence seq = synthesize_sequence(spec, subject, cls, video);
        const fs::path dir = frames_root / seq.video_id;
        fs::create_directories(dir);
        for (std::size_t t = 0; t < seq.frames.size(); ++t) {
          char name[32];
          std::snprintf(name, sizeof(name), "frame_%03zu.png", t);
          write_frame(seq.frames[t], dir / name);
        }
        manifest.records.push_back({seq.video_id, seq.subject_id, seq.label, dir, {}, {}});
      }
    }
  }
  write_manifest_csv(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace ostrain
