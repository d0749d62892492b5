#include "ostrain/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "ostrain/error.hpp"

namespace ostrain {

std::string to_string(FeatureSet s) {
  switch (s) {
    case FeatureSet::kOsfOsw: return "osf+osw";
    case FeatureSet::kOsf: return "osf";
    case FeatureSet::kOsw: return "osw";
  }
  return "osf+osw";
}

FeatureSet parse_feature_set(const std::string& text) {
  if (text == "osf+osw" || text == "all") return FeatureSet::kOsfOsw;
  if (text == "osf") return FeatureSet::kOsf;
  if (text == "osw") return FeatureSet::kOsw;
  throw Error(ErrorCode::kParse, "unknown feature set '" + text + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kParse, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw Error(ErrorCode::kParse, key + ": expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw Error(ErrorCode::kParse, key + ": expected true/false, got '" + v + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Field {
  const char* key;
  bool affects_features;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
};

#define OSTRAIN_INT(name, expr, feat)                                                      \
  Field {                                                                                  \
    name, feat, [](const PipelineConfig& c) { return std::to_string(c.expr); },            \
        [](PipelineConfig& c, const std::string& k, const std::string& v) {                \
          c.expr = parse_int(k, v);                                                        \
        }                                                                                  \
  }
#define OSTRAIN_REAL(name, expr, feat)                                                     \
  Field {                                                                                  \
    name, feat, [](const PipelineConfig& c) { return format_double(c.expr); },             \
        [](PipelineConfig& c, const std::string& k, const std::string& v) {                \
          c.expr = parse_real(k, v);                                                       \
        }                                                                                  \
  }
#define OSTRAIN_BOOL(name, expr, feat)                                                     \
  Field {                                                                                  \
    name, feat, [](const PipelineConfig& c) { return bool_text(c.expr); },                 \
        [](PipelineConfig& c, const std::string& k, const std::string& v) {                \
          c.expr = parse_bool(k, v);                                                       \
        }                                                                                  \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      OSTRAIN_INT("p_xy", lbptop.neighbors[0], true),
      OSTRAIN_INT("p_xt", lbptop.neighbors[1], true),
      OSTRAIN_INT("p_yt", lbptop.neighbors[2], true),
      OSTRAIN_INT("r_x", lbptop.r_x, true),
      OSTRAIN_INT("r_y", lbptop.r_y, true),
      OSTRAIN_INT("r_t", lbptop.r_t, true),
      OSTRAIN_INT("n_blocks", lbptop.n_blocks, true),
      OSTRAIN_INT("bins_per_plane", lbptop.bins_per_plane, true),
      OSTRAIN_REAL("rho_l", rho_l, true),
      OSTRAIN_REAL("rho_u", rho_u, true),
      OSTRAIN_REAL("edge_quantile", edge_quantile, true),
      OSTRAIN_INT("flow_window", flow_window, true),
      OSTRAIN_REAL("min_eigenvalue", min_eigenvalue, true),
      OSTRAIN_REAL("max_condition", max_condition, true),
      OSTRAIN_BOOL("gaussian_osf", gaussian_osf, true),
      OSTRAIN_BOOL("gaussian_osw", gaussian_osw, true),
      OSTRAIN_INT("gaussian_size", gaussian_size, true),
      OSTRAIN_REAL("gaussian_sigma", gaussian_sigma, true),
      OSTRAIN_BOOL("noise_blocks", noise_blocks, true),
      OSTRAIN_BOOL("osw_preprocess", osw_preprocess, true),
      OSTRAIN_INT("osf_size", osf_size, true),
      Field{"resample", true,
            [](const PipelineConfig& c) {
              switch (c.resample) {
                case ResampleMode::kOn: return std::string("on");
                case ResampleMode::kOff: return std::string("off");
                case ResampleMode::kAuto: break;
              }
              return std::string("auto");
            },
            [](PipelineConfig& c, const std::string& k, const std::string& v) {
              if (v == "auto") {
                c.resample = ResampleMode::kAuto;
              } else {
                c.resample = parse_bool(k, v) ? ResampleMode::kOn : ResampleMode::kOff;
              }
            }},
      OSTRAIN_INT("resample_length", resample_length, true),
      Field{"feature_set", false, [](const PipelineConfig& c) { return to_string(c.feature_set); },
            [](PipelineConfig& c, const std::string&, const std::string& v) {
              c.feature_set = parse_feature_set(v);
            }},
      Field{"protocol", false, [](const PipelineConfig& c) { return to_string(c.protocol); },
            [](PipelineConfig& c, const std::string&, const std::string& v) {
              c.protocol = parse_protocol(v);
            }},
      OSTRAIN_REAL("svm_c", svm_c, false),
      OSTRAIN_REAL("svm_tolerance", svm_tolerance, false),
      OSTRAIN_INT("svm_max_epochs", svm_max_epochs, false),
      Field{"svm_seed", false, [](const PipelineConfig& c) { return std::to_string(c.svm_seed); },
            [](PipelineConfig& c, const std::string& k, const std::string& v) {
              const int s = parse_int(k, v);
              if (s < 0) throw Error(ErrorCode::kParse, k + ": must be non-negative");
              c.svm_seed = static_cast<std::uint32_t>(s);
            }},
      OSTRAIN_BOOL("standardize", standardize, false),
      OSTRAIN_INT("threads", threads, false),
      Field{"on_error", false,
            [](const PipelineConfig& c) { return std::string(c.abort_on_error ? "abort" : "skip"); },
            [](PipelineConfig& c, const std::string& k, const std::string& v) {
              if (v == "abort") {
                c.abort_on_error = true;
              } else if (v == "skip") {
                c.abort_on_error = false;
              } else {
                throw Error(ErrorCode::kParse, k + ": expected skip or abort, got '" + v + "'");
              }
            }},
      OSTRAIN_BOOL("use_cache", use_cache, false),
      Field{"out_dir", false, [](const PipelineConfig& c) { return c.out_dir; },
            [](PipelineConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
  };
  return kFields;
}

#undef OSTRAIN_INT
#undef OSTRAIN_REAL
#undef OSTRAIN_BOOL

const Field& field(const std::string& key) {
  for (const Field& f : fields()) {
    if (key == f.key) return f;
  }
  throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> out;
    for (const Field& f : fields()) out.emplace_back(f.key);
    return out;
  }();
  return kKeys;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  field(key).set(*this, key, trim(value));
}

std::string PipelineConfig::get(const std::string& key) const { return field(key).get(*this); }

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  lbptop.validate();
  if (!(rho_l >= 0.0 && rho_l <= 1.0) || !(rho_u >= 0.0 && rho_u <= 1.0)) {
    fail("rho_l and rho_u must lie in [0,1]");
  }
  if (rho_l + rho_u > 1.0) fail("rho_l + rho_u must not exceed 1");
  if (!(edge_quantile > 0.0 && edge_quantile < 1.0)) fail("edge_quantile must lie in (0,1)");
  if (flow_window < 3 || flow_window % 2 == 0) fail("flow_window must be odd and >= 3");
  if (!(min_eigenvalue >= 0.0)) fail("min_eigenvalue must be >= 0");
  if (!(max_condition >= 1.0)) fail("max_condition must be >= 1");
  if (gaussian_size < 1 || gaussian_size % 2 == 0) fail("gaussian_size must be odd");
  if (!(gaussian_sigma > 0.0)) fail("gaussian_sigma must be positive");
  if (osf_size < 1) fail("osf_size must be positive");
  if (resample_length < 2) fail("resample_length must be >= 2");
  if (!(svm_c > 0.0)) fail("svm_c must be positive");
  if (!(svm_tolerance > 0.0)) fail("svm_tolerance must be positive");
  if (svm_max_epochs < 1) fail("svm_max_epochs must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  if (noise_blocks && lbptop.n_blocks < 2) fail("noise_blocks requires n_blocks >= 2");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream os;
  for (const Field& f : fields()) os << f.key << " = " << f.get(*this) << '\n';
  return os.str();
}

std::string PipelineConfig::feature_text() const {
  std::ostringstream os;
  for (const Field& f : fields()) {
    if (f.affects_features) os << f.key << " = " << f.get(*this) << '\n';
  }
  // Resampling depends on the protocol only through the auto mode.
  os << "resample_effective = " << bool_text(resample_enabled()) << '\n';
  return os.str();
}

PipelineConfig PipelineConfig::from_text(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": missing '='");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open config " + file.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_text(buf.str());
}

void PipelineConfig::save(const std::filesystem::path& file) const {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + file.string());
  os << to_text();
}

OsfParams PipelineConfig::osf_params() const {
  OsfParams p;
  p.flow = {flow_window, min_eigenvalue, max_condition};
  p.edge_quantile = edge_quantile;
  p.rho_lower = rho_l;
  p.rho_upper = rho_u;
  p.out_width = osf_size;
  p.out_height = osf_size;
  p.gaussian = gaussian_osf;
  p.gaussian_size = gaussian_size;
  p.gaussian_sigma = gaussian_sigma;
  return p;
}

OswParams PipelineConfig::osw_params() const {
  OswParams p;
  p.lbptop = lbptop;
  p.flow = {flow_window, min_eigenvalue, max_condition};
  p.gaussian = gaussian_osw;
  p.gaussian_size = gaussian_size;
  p.gaussian_sigma = gaussian_sigma;
  p.noise_blocks = noise_blocks;
  p.preprocess = osw_preprocess;
  p.edge_quantile = edge_quantile;
  p.rho_lower = rho_l;
  p.rho_upper = rho_u;
  return p;
}

EvalOptions PipelineConfig::eval_options() const {
  EvalOptions o;
  o.protocol = protocol;
  o.svm.c = svm_c;
  o.svm.tolerance = svm_tolerance;
  o.svm.max_epochs = svm_max_epochs;
  o.svm.seed = svm_seed;
  o.standardize = standardize;
  o.threads = threads;
  return o;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  static constexpr char kHex[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = kHex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

}  // namespace ostrain
