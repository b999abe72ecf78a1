#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swd/classify.hpp"
#include "swd/kendall.hpp"
#include "swd/preprocess.hpp"
#include "swd/signal_model.hpp"

namespace swd::detector {

enum class Aggregation { max_tau };
enum class FilterScope { per_segment, whole_channel };

struct DetectorConfig {
  double tau_threshold = 0.5;
  double p_threshold = 0.05;
  FilterConfig filter;
  ScaleParams scale;
  Aggregation template_aggregation = Aggregation::max_tau;
  std::optional<std::string> patient_filter;
  FilterScope filter_scope = FilterScope::per_segment;
  kendall::TauVariant variant = kendall::TauVariant::tau_b;
  kendall::Tail tail = kendall::Tail::two_sided;
};

/// Throws config_error when a threshold is out of range.
void validate_detector_config(const DetectorConfig& cfg);

struct ChannelCount {
  std::size_t channel_index = 0;
  std::size_t segments = 0;
  std::size_t positives = 0;
};

struct ScanReport {
  std::vector<DetectionResult> rows;  // ordered by (channel, segment, L)
  std::size_t segments_scanned = 0;
  std::size_t positives = 0;
  std::vector<ChannelCount> per_channel;
  std::vector<std::string> warnings;   // e.g. template lengths skipped
  std::vector<std::string> channels;   // labels, index-aligned with rows
  double sample_rate_hz = 0.0;
};

/// Score one segment against every template of matching length: preprocess
/// the pair, compute tau/z/p, keep the max-tau template (ties break to the
/// lexicographically smallest id), then apply the thresholds. Flat segments
/// come back negative and degenerate with tau 0 / p 1.
/// Throws no_compatible_template when no template length matches.
DetectionResult score_segment(const Segment& seg,
                              const std::vector<Template>& templates,
                              const DetectorConfig& cfg,
                              double sample_rate_hz);

/// Scan all channels against all template lengths; rows in canonical
/// (channel_index, segment_index, L) order. Template lengths longer than
/// the recording are skipped with a warning.
ScanReport scan_recording(const Recording& rec,
                          const std::vector<Template>& templates,
                          const DetectorConfig& cfg);

/// A row is truth-positive when its window overlaps an annotated event on
/// its channel (or a channel-less event) by >= overlap_frac of the window.
classify::ConfusionMatrix match_annotations(const ScanReport& report,
                                            const AnnotationSet& truth,
                                            double sample_rate_hz,
                                            double overlap_frac = 0.5);

/// (tau, p, truth) per report row, for classifier training downstream.
std::vector<FeaturePoint> truth_features(const ScanReport& report,
                                         const AnnotationSet& truth,
                                         double sample_rate_hz,
                                         double overlap_frac = 0.5);

}  // namespace swd::detector
