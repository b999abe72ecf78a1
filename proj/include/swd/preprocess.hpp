#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "swd/signal_model.hpp"

namespace swd {

/// Partition of an N-sample channel into floor(N/L) windows of length L.
struct SegmentationPlan {
  std::size_t window_len_L = 0;
  std::size_t num_segments = 0;
  std::size_t remainder_samples = 0;
};

/// Causal k-point moving average; k=5 matches the pipeline default.
struct FilterConfig {
  std::size_t k = 5;
};

/// Target range for min-max scaling; the pipeline maps into [-1, +1].
struct ScaleParams {
  double alpha = -1.0;
  double beta = 1.0;
};

/// Scaled samples plus a flag for constant input (max == min), where the
/// affine map is undefined and the midpoint is emitted instead.
struct ScaledVector {
  std::vector<double> values;
  bool degenerate = false;
};

/// Throws window_longer_than_signal when n < L, invalid_param when L < 3.
SegmentationPlan plan_segmentation(std::size_t n, std::size_t L);

/// Non-overlapping, contiguous windows covering [0, floor(n/L)*L);
/// the trailing remainder is discarded. channel_index is stamped on
/// every produced segment.
std::vector<Segment> segment_channel(std::span<const double> samples,
                                     std::size_t L,
                                     std::size_t channel_index = 0);

/// output[i] = mean(x[max(0, i-k+1) .. i]); expanding window at the start,
/// so output length equals input length and constants pass through.
std::vector<double> moving_average(std::span<const double> x,
                                   const FilterConfig& filt);

/// Affine map sending min -> alpha and max -> beta. Constant input maps to
/// the midpoint with the degenerate flag set.
ScaledVector minmax_scale(std::span<const double> v, const ScaleParams& sp);

/// Filter then scale both waveforms with identical parameters.
/// Throws length_mismatch when the lengths differ.
std::pair<ScaledVector, ScaledVector> preprocess_pair(const Segment& seg,
                                                      const Template& tpl,
                                                      const FilterConfig& filt,
                                                      const ScaleParams& sp);

}  // namespace swd
