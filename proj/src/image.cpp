#include "ostrain/image.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <opencv2/imgcodecs.hpp>

#include "ostrain/error.hpp"

namespace ostrain {

namespace fs = std::filesystem;

double Image::clamped(int x, int y) const {
  x = std::clamp(x, 0, width - 1);
  y = std::clamp(y, 0, height - 1);
  return at(x, y);
}

void validate_sequence(const FrameSequence& seq) {
  if (seq.frames.size() < 2) {
    throw Error(ErrorCode::kSequenceTooShort,
                "sequence too short: " + seq.video_id + " has " +
                    std::to_string(seq.frames.size()) + " frame(s)");
  }
  const Frame& first = seq.frames.front();
  if (first.width < 3 || first.height < 3) {
    throw Error(ErrorCode::kInvalidArgument, "frames must be at least 3x3");
  }
  for (const Frame& f : seq.frames) {
    if (!f.same_shape(first) || f.data.size() != first.data.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame dimensions differ within sequence " + seq.video_id);
    }
  }
}

namespace {

bool is_image_file(const fs::path& p) {
  static const std::set<std::string> kExtensions = {".png", ".pgm", ".ppm", ".pnm",
                                                    ".jpg", ".jpeg", ".bmp"};
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return kExtensions.contains(ext);
}

}  // namespace

Frame read_frame(const fs::path& file) {
  const cv::Mat raw = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) {
    throw Error(ErrorCode::kUndecodableFile, "cannot decode image " + file.string());
  }
  double scale = 0.0;
  switch (raw.depth()) {
    case CV_8U: scale = 1.0 / 255.0; break;
    case CV_16U: scale = 1.0 / 65535.0; break;
    default:
      throw Error(ErrorCode::kUndecodableFile, "unsupported pixel depth in " + file.string());
  }
  cv::Mat values;
  raw.convertTo(values, CV_64F, scale);

  Frame frame(values.cols, values.rows);
  const int channels = values.channels();
  for (int y = 0; y < values.rows; ++y) {
    const double* row = values.ptr<double>(y);
    for (int x = 0; x < values.cols; ++x) {
      const double* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      double v = px[0];
      if (channels >= 3) {
        // OpenCV stores color as BGR(A).
        v = 0.299 * px[2] + 0.587 * px[1] + 0.114 * px[0];
      }
      frame.at(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return frame;
}

void write_frame(const Frame& frame, const fs::path& file) {
  cv::Mat out(frame.height, frame.width, CV_8UC1);
  for (int y = 0; y < frame.height; ++y) {
    auto* row = out.ptr<unsigned char>(y);
    for (int x = 0; x < frame.width; ++x) {
      row[x] = static_cast<unsigned char>(
          std::lround(std::clamp(frame.at(x, y), 0.0, 1.0) * 255.0));
    }
  }
  if (!cv::imwrite(file.string(), out)) {
    throw Error(ErrorCode::kIo, "cannot write image " + file.string());
  }
}

FrameSequence load_sequence(const fs::path& dir, std::string video_id,
                            std::string subject_id, std::string label) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kMissingDirectory, "frame directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  FrameSequence seq;
  seq.video_id = video_id.empty() ? dir.filename().string() : std::move(video_id);
  seq.subject_id = std::move(subject_id);
  seq.label = std::move(label);
  if (files.size() < 2) {
    throw Error(ErrorCode::kSequenceTooShort,
                "sequence too short: " + dir.string() + " has " +
                    std::to_string(files.size()) + " frame(s)");
  }
  seq.frames.reserve(files.size());
  for (const auto& f : files) {
    seq.frames.push_back(read_frame(f));
    if (!seq.frames.back().same_shape(seq.frames.front())) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame " + f.filename().string() + " differs in size from " +
                      files.front().filename().string());
    }
  }
  validate_sequence(seq);
  return seq;
}

std::vector<double> gaussian_kernel_1d(int size, double sigma) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian kernel size must be odd and positive");
  }
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian sigma must be positive");
  }
  const int r = size / 2;
  std::vector<double> k(size);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - r;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

Frame gaussian_filter(const Frame& f, int size, double sigma) {
  const std::vector<double> k = gaussian_kernel_1d(size, sigma);
  const int r = size / 2;

  Frame tmp(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * f.clamped(x + i, y);
      tmp.at(x, y) = acc;
    }
  }
  Frame out(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.clamped(x, y + i);
      out.at(x, y) = acc;
    }
  }
  return out;
}

Frame sobel_vertical(const Frame& f) {
  if (f.width < 3 || f.height < 3) {
    throw Error(ErrorCode::kInvalidArgument, "sobel needs a frame of at least 3x3");
  }
  Frame out(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const double right = f.clamped(x + 1, y - 1) + 2.0 * f.clamped(x + 1, y) +
                           f.clamped(x + 1, y + 1);
      const double left = f.clamped(x - 1, y - 1) + 2.0 * f.clamped(x - 1, y) +
                          f.clamped(x - 1, y + 1);
      out.at(x, y) = std::abs(right - left);
    }
  }
  return out;
}

Frame resize_bilinear(const Frame& f, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resize target dimensions must be positive");
  }
  if (f.width < 1 || f.height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "cannot resize an empty frame");
  }
  const double sx = static_cast<double>(f.width) / out_w;
  const double sy = static_cast<double>(f.height) / out_h;

  Frame out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, f.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, f.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, f.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, f.width - 1);
      const double wx = fx - x0;
      const double top = std::lerp(f.at(x0, y0), f.at(x1, y0), wx);
      const double bottom = std::lerp(f.at(x0, y1), f.at(x1, y1), wx);
      out.at(x, y) = std::lerp(top, bottom, wy);
    }
  }
  return out;
}

}  // namespace ostrain
