#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace swd {

/// Multichannel recording; data[m] holds channel m, all rows equal length.
struct Recording {
  std::vector<std::string> channels;
  double sample_rate_hz = 256.0;
  std::vector<std::vector<double>> data;

  std::size_t num_channels() const noexcept { return data.size(); }
  std::size_t num_samples() const noexcept {
    return data.empty() ? 0 : data.front().size();
  }
  double duration_s() const noexcept {
    return static_cast<double>(num_samples()) / sample_rate_hz;
  }
};

/// Single-channel reference waveform a segment is scored against.
struct Template {
  std::string id;
  std::optional<std::string> patient_id;
  std::vector<double> samples;
  double sample_rate_hz = 256.0;
};

/// One channel's window [start_sample, end_sample).
struct Segment {
  std::size_t channel_index = 0;
  std::size_t segment_index = 0;
  std::vector<double> samples;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
};

struct AnnotationEvent {
  std::optional<std::string> channel_label;  // absent = applies to all channels
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label = "SWD";
};

struct AnnotationSet {
  std::vector<AnnotationEvent> events;
};

/// Classifier input: the (tau, p) pair for one segment plus its truth label.
struct FeaturePoint {
  double tau = 0.0;
  double p = 1.0;
  bool swd = false;
};

/// Outcome of scoring one segment against a template set.
struct DetectionResult {
  std::size_t channel_index = 0;
  std::size_t segment_index = 0;
  std::size_t window_len = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  double tau = 0.0;
  double z = 0.0;
  double p = 1.0;
  std::string best_template_id;
  bool positive = false;
  bool degenerate = false;
};

/// Throws Error(ragged_rows | empty_recording | non_positive_rate) when a
/// Recording invariant is violated.
void validate_recording(const Recording& rec);

/// Throws Error(event_out_of_bounds equivalent: invalid_param) when an event
/// has start_s >= end_s or negative times.
void validate_annotations(const AnnotationSet& set);

/// The 22-electrode 10-20 montage used when a recording file has no header.
const std::vector<std::string>& default_channel_labels();

}  // namespace swd
