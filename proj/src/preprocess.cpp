#include "swd/preprocess.hpp"

#include <algorithm>
#include <string>

#include "swd/error.hpp"
#include "swd/kernels.hpp"

namespace swd {

SegmentationPlan plan_segmentation(std::size_t n, std::size_t L) {
  if (L < 3)
    raise(errc::invalid_param,
          "window length must be >= 3, got " + std::to_string(L));
  if (n < L)
    raise(errc::window_longer_than_signal,
          "signal has " + std::to_string(n) + " samples, window needs " +
              std::to_string(L));
  SegmentationPlan plan;
  plan.window_len_L = L;
  plan.num_segments = n / L;
  plan.remainder_samples = n % L;
  return plan;
}

std::vector<Segment> segment_channel(std::span<const double> samples,
                                     std::size_t L,
                                     std::size_t channel_index) {
  const SegmentationPlan plan = plan_segmentation(samples.size(), L);
  std::vector<Segment> out;
  out.reserve(plan.num_segments);
  for (std::size_t s = 0; s < plan.num_segments; ++s) {
    Segment seg;
    seg.channel_index = channel_index;
    seg.segment_index = s;
    seg.start_sample = s * L;
    seg.end_sample = seg.start_sample + L;
    seg.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(seg.start_sample),
                       samples.begin() + static_cast<std::ptrdiff_t>(seg.end_sample));
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> x,
                                   const FilterConfig& filt) {
  std::vector<double> out(x.size());
  kernels::moving_average(x, filt.k, out);
  return out;
}

ScaledVector minmax_scale(std::span<const double> v, const ScaleParams& sp) {
  if (v.empty()) raise(errc::invalid_param, "minmax_scale: empty input");
  if (!(sp.alpha < sp.beta))
    raise(errc::invalid_param, "minmax_scale: requires alpha < beta");

  ScaledVector out;
  out.values.resize(v.size());

  double mn = 0.0, mx = 0.0;
  kernels::min_max(v, mn, mx);
  if (mn == mx) {
    const double mid = 0.5 * (sp.alpha + sp.beta);
    std::fill(out.values.begin(), out.values.end(), mid);
    out.degenerate = true;
    return out;
  }

  const double scale = (sp.beta - sp.alpha) / (mx - mn);
  kernels::affine_map(v, mn, scale, sp.alpha, out.values);
  // The fused (v-mn)*scale+alpha form can overshoot beta by a couple of ulp
  // at the top of the range; pin the result into the contract interval.
  for (double& o : out.values) o = std::clamp(o, sp.alpha, sp.beta);
  return out;
}

std::pair<ScaledVector, ScaledVector> preprocess_pair(const Segment& seg,
                                                      const Template& tpl,
                                                      const FilterConfig& filt,
                                                      const ScaleParams& sp) {
  if (seg.samples.size() != tpl.samples.size())
    raise(errc::length_mismatch,
          "segment length " + std::to_string(seg.samples.size()) +
              " != template length " + std::to_string(tpl.samples.size()));
  const std::vector<double> fs = moving_average(seg.samples, filt);
  const std::vector<double> ft = moving_average(tpl.samples, filt);
  return {minmax_scale(fs, sp), minmax_scale(ft, sp)};
}

}  // namespace swd
