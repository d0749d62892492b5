#pragma once

#include <array>
#include <vector>

#include "ostrain/flow.hpp"
#include "ostrain/image.hpp"
#include "ostrain/strain.hpp"

namespace ostrain {

/// Clipping thresholds of one horizontal band of a strain map.
struct ClipThresholds {
  double t_lower = 0.0;
  double t_upper = 0.0;
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;

  static ClipThresholds from_range(double eps_min, double eps_max, double rho_lower,
                                   double rho_upper);
  bool keeps(double v) const { return v >= t_lower && v <= t_upper; }
};

/// Row range [begin, end) of a band.
struct RowBand {
  int begin = 0;
  int end = 0;
};

/// Three bands of height/3 rows; remainder rows go to the bottom band.
std::array<RowBand, 3> horizontal_bands(int height);

struct OsfParams {
  FlowParams flow;
  double edge_quantile = 0.9;
  double rho_lower = 0.05;
  double rho_upper = 0.05;
  int out_width = 50;
  int out_height = 50;
  bool gaussian = true;
  int gaussian_size = 5;
  double gaussian_sigma = 0.5;
};

/// Linear-interpolated quantile (q in [0,1]) of unsorted values.
double quantile(std::vector<double> values, double q);

/// Zeroes strain where the vertical-edge Sobel response of `source` reaches the
/// `edge_quantile` quantile of its nonzero responses.
StrainMap suppress_vertical_edges(const StrainMap& strain, const Frame& source,
                                  double edge_quantile = 0.9);

std::array<ClipThresholds, 3> band_thresholds(const StrainMap& strain, double rho_lower,
                                              double rho_upper);

/// Zeroes magnitudes outside their band's [T_l, T_u].
StrainMap clip_by_region(const StrainMap& strain, double rho_lower = 0.05,
                         double rho_upper = 0.05);

/// Edge suppression then clipping, applied to each map of a sequence.
/// `sources[j]` is the first frame of the pair that produced `maps[j]`.
std::vector<StrainMap> preprocess_strain(const std::vector<StrainMap>& maps,
                                         const std::vector<Frame>& sources,
                                         double edge_quantile, double rho_lower,
                                         double rho_upper);

/// Elementwise mean of the magnitudes.
Image temporal_mean(const std::vector<StrainMap>& maps);

/// Divides by the maximum; an all-zero map stays all-zero.
Image max_normalize(Image m);

/// OSF vector of an already-computed strain sequence.
std::vector<double> osf_from_strain(const std::vector<StrainMap>& maps,
                                    const std::vector<Frame>& sources, const OsfParams& params);

std::vector<double> osf_vector(const FrameSequence& seq, const OsfParams& params = {});

}  // namespace ostrain
