#include "swd/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "swd/error.hpp"

namespace swd::synth {
namespace {

/// Voss-McCartney pink noise: R rows refreshed at octave-spaced rates (row =
/// trailing zeros of the sample counter) plus a per-sample white term,
/// normalized to roughly unit variance.
class PinkNoise {
 public:
  explicit PinkNoise(SplitMix64& rng) : rng_(rng) {
    for (double& row : rows_) row = rng_.next_gauss();
  }

  double next() {
    ++counter_;
    const int row = std::min(std::countr_zero(counter_), kRows - 1);
    rows_[static_cast<std::size_t>(row)] = rng_.next_gauss();
    double s = rng_.next_gauss();
    for (double row_value : rows_) s += row_value;
    return s / norm_;
  }

 private:
  static constexpr int kRows = 16;
  SplitMix64& rng_;
  double rows_[kRows];
  std::uint64_t counter_ = 0;
  double norm_ = std::sqrt(static_cast<double>(kRows + 1));
};

double spike_sigma_s(const SynthConfig& cfg) {
  return cfg.spike_width_ms * 1e-3 / 6.0;  // +-3 sigma spans the spike
}

/// Raw (pre-centering) morphology at time t within one cycle of duration T:
/// unit-amplitude Gaussian spike in the first spike_width stretch, then a
/// negative half-sine with wave_amplitude_ratio of the spike height.
double cycle_shape(const SynthConfig& cfg, double t_in_cycle) {
  const double T = 1.0 / cfg.swd_freq_hz;
  const double w = cfg.spike_width_ms * 1e-3;
  if (t_in_cycle < w) {
    const double d = t_in_cycle - 0.5 * w;
    const double s = spike_sigma_s(cfg);
    return std::exp(-0.5 * d * d / (s * s));
  }
  const double u = (t_in_cycle - w) / (T - w);  // in [0, 1)
  return -cfg.wave_amplitude_ratio * std::sin(std::numbers::pi * u);
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void validate_synth_config(const SynthConfig& cfg) {
  const auto fail = [](const std::string& what) {
    raise(errc::config_error, "synth config: " + what);
  };
  if (!(cfg.sample_rate_hz > 0.0)) fail("sample_rate_hz must be > 0");
  if (!(cfg.swd_freq_hz > 0.0)) fail("swd_freq_hz must be > 0");
  if (!(cfg.spike_width_ms > 0.0)) fail("spike_width_ms must be > 0");
  if (cfg.spike_width_ms * 1e-3 >= 1.0 / cfg.swd_freq_hz)
    fail("spike_width_ms must be shorter than one SWD cycle");
  if (!(cfg.wave_amplitude_ratio > 0.0))
    fail("wave_amplitude_ratio must be > 0");
  if (!(cfg.snr_db == cfg.snr_db) || std::isinf(cfg.snr_db))
    fail("snr_db must be finite");
  if (cfg.num_channels == 0) fail("num_channels must be >= 1");
  if (!(cfg.duration_s > 0.0)) fail("duration_s must be > 0");
  for (const SynthEvent& ev : cfg.events) {
    if (ev.cycles < 1) fail("event cycles must be >= 1");
    if (ev.start_s < 0.0) fail("event start_s must be >= 0");
  }
}

std::vector<std::string> channel_labels(const SynthConfig& cfg) {
  const auto& standard = default_channel_labels();
  std::vector<std::string> labels;
  labels.reserve(cfg.num_channels);
  for (std::size_t i = 0; i < cfg.num_channels; ++i) {
    if (i < standard.size())
      labels.push_back(standard[i]);
    else
      labels.push_back("Ch" + std::to_string(i + 1));
  }
  return labels;
}

Template make_template(const SynthConfig& cfg, int cycles) {
  validate_synth_config(cfg);
  if (cycles < 1) raise(errc::invalid_param, "make_template: cycles must be >= 1");

  const double T = 1.0 / cfg.swd_freq_hz;
  const std::size_t len = static_cast<std::size_t>(std::llround(
      static_cast<double>(cycles) * cfg.sample_rate_hz / cfg.swd_freq_hz));

  Template tpl;
  tpl.id = "swd_" + std::to_string(cycles) + "cyc";
  tpl.sample_rate_hz = cfg.sample_rate_hz;
  tpl.samples.resize(len);

  double mean = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate_hz;
    const double v = cycle_shape(cfg, t - std::floor(t / T) * T);
    tpl.samples[i] = v;
    mean += v;
  }
  mean /= static_cast<double>(len);
  for (double& v : tpl.samples) v -= mean;
  return tpl;
}

std::pair<Recording, AnnotationSet> make_recording(const SynthConfig& cfg) {
  validate_synth_config(cfg);

  Recording rec;
  rec.sample_rate_hz = cfg.sample_rate_hz;
  rec.channels = channel_labels(cfg);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate_hz));
  if (n == 0) raise(errc::config_error, "synth config: duration_s too short");

  // Noise amplitude from the SNR against a one-cycle burst's RMS.
  const double burst_rms = rms(make_template(cfg, 1).samples);
  const double noise_sigma = burst_rms / std::pow(10.0, cfg.snr_db / 20.0);

  rec.data.resize(cfg.num_channels);
  for (std::size_t ch = 0; ch < cfg.num_channels; ++ch) {
    SplitMix64 rng(cfg.seed ^ static_cast<std::uint64_t>(ch));
    auto& row = rec.data[ch];
    row.resize(n);
    if (cfg.noise_kind == NoiseKind::pink) {
      PinkNoise pink(rng);
      for (double& x : row) x = noise_sigma * pink.next();
    } else {
      for (double& x : row) x = noise_sigma * rng.next_gauss();
    }
  }

  AnnotationSet ann;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (start, end) per event
  std::vector<std::size_t> span_channel;
  for (const SynthEvent& ev : cfg.events) {
    const auto it = std::find(rec.channels.begin(), rec.channels.end(), ev.channel);
    if (it == rec.channels.end())
      raise(errc::unknown_channel, "event channel '" + ev.channel +
                                       "' not in this recording");
    const std::size_t ch =
        static_cast<std::size_t>(it - rec.channels.begin());
    const Template burst = make_template(cfg, ev.cycles);
    const long long start_ll = std::llround(ev.start_s * cfg.sample_rate_hz);
    const std::size_t start = static_cast<std::size_t>(start_ll);
    const std::size_t end = start + burst.samples.size();
    if (start_ll < 0 || end > n)
      raise(errc::event_out_of_bounds,
            "event on " + ev.channel + " at " + std::to_string(ev.start_s) +
                " s does not fit in " + std::to_string(cfg.duration_s) + " s");
    for (std::size_t k = 0; k < spans.size(); ++k) {
      if (span_channel[k] == ch && start < spans[k].second &&
          spans[k].first < end)
        raise(errc::overlapping_events,
              "events overlap on channel " + ev.channel);
    }
    spans.emplace_back(start, end);
    span_channel.push_back(ch);

    for (std::size_t i = 0; i < burst.samples.size(); ++i)
      rec.data[ch][start + i] += burst.samples[i];

    AnnotationEvent a;
    a.channel_label = ev.channel;
    a.start_s = static_cast<double>(start) / cfg.sample_rate_hz;
    a.end_s = static_cast<double>(end) / cfg.sample_rate_hz;
    a.label = "SWD";
    ann.events.push_back(std::move(a));
  }
  return {std::move(rec), std::move(ann)};
}

}  // namespace swd::synth
