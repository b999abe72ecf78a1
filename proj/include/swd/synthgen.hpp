#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swd/signal_model.hpp"

namespace swd::synth {

/// SplitMix64: tiny seedable generator with published constants, so any
/// implementation reproduces the identical stream from the same seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Approximate standard normal: sum of 12 uniforms minus 6.
  double next_gauss() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += next_unit();
    return s - 6.0;
  }

 private:
  std::uint64_t state_;
};

struct SynthEvent {
  std::string channel;   // label, e.g. "Cz"
  double start_s = 0.0;
  int cycles = 3;
};

enum class NoiseKind { white, pink };

struct SynthConfig {
  std::uint64_t seed = 1;
  double sample_rate_hz = 256.0;
  double swd_freq_hz = 2.5;          // SWD band is 1-3 Hz
  double spike_width_ms = 40.0;
  double wave_amplitude_ratio = 0.5;
  NoiseKind noise_kind = NoiseKind::pink;
  double snr_db = 20.0;
  std::size_t num_channels = 22;
  double duration_s = 60.0;
  std::vector<SynthEvent> events;
};

/// Throws config_error when a field is out of range; the message names it.
void validate_synth_config(const SynthConfig& cfg);

/// Channel labels for a config: the standard montage, truncated or extended
/// to num_channels.
std::vector<std::string> channel_labels(const SynthConfig& cfg);

/// One SWD waveform: per cycle a sharp positive Gaussian spike followed by a
/// slow negative half-sine wave, concatenated at swd_freq_hz, zero-mean.
/// Length = round(cycles * sample_rate_hz / swd_freq_hz).
Template make_template(const SynthConfig& cfg, int cycles);

/// Background noise plus the configured SWD events; annotations carry the
/// exact sample-aligned boundaries of every injected event.
std::pair<Recording, AnnotationSet> make_recording(const SynthConfig& cfg);

}  // namespace swd::synth
