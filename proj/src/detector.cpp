#include "swd/detector.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "swd/error.hpp"

namespace swd::detector {
namespace {

std::vector<Template> apply_patient_filter(const std::vector<Template>& templates,
                                           const DetectorConfig& cfg) {
  if (!cfg.patient_filter) return templates;
  std::vector<Template> kept;
  for (const Template& t : templates)
    if (t.patient_id && *t.patient_id == *cfg.patient_filter)
      kept.push_back(t);
  return kept;
}

bool row_is_truth_positive(const DetectionResult& row,
                           const std::string& row_channel,
                           const AnnotationSet& truth, double sample_rate_hz,
                           double overlap_frac) {
  const double duration =
      row.window_len > 0
          ? static_cast<double>(row.window_len) / sample_rate_hz
          : row.end_s - row.start_s;
  const double needed = overlap_frac * duration;
  for (const AnnotationEvent& ev : truth.events) {
    if (ev.channel_label && *ev.channel_label != row_channel) continue;
    const double overlap = std::min(row.end_s, ev.end_s) -
                           std::max(row.start_s, ev.start_s);
    if (overlap >= needed) return true;
  }
  return false;
}

const std::string& channel_label_of(const ScanReport& report,
                                    std::size_t index) {
  static const std::string empty;
  return index < report.channels.size() ? report.channels[index] : empty;
}

}  // namespace

void validate_detector_config(const DetectorConfig& cfg) {
  if (!(cfg.tau_threshold >= -1.0 && cfg.tau_threshold <= 1.0))
    raise(errc::config_error, "tau_threshold must lie in [-1, 1]");
  if (!(cfg.p_threshold > 0.0 && cfg.p_threshold <= 1.0))
    raise(errc::config_error, "p_threshold must lie in (0, 1]");
  if (cfg.filter.k < 1) raise(errc::config_error, "filter k must be >= 1");
  if (!(cfg.scale.alpha < cfg.scale.beta))
    raise(errc::config_error, "scale requires alpha < beta");
}

DetectionResult score_segment(const Segment& seg,
                              const std::vector<Template>& templates,
                              const DetectorConfig& cfg,
                              double sample_rate_hz) {
  DetectionResult out;
  out.channel_index = seg.channel_index;
  out.segment_index = seg.segment_index;
  out.window_len = seg.samples.size();
  out.start_s = static_cast<double>(seg.start_sample) / sample_rate_hz;
  out.end_s = static_cast<double>(seg.end_sample) / sample_rate_hz;

  bool any_compatible = false;
  bool best_set = false;
  kendall::TauResult best;
  std::string best_id;
  bool segment_flat = false;

  for (const Template& tpl : templates) {
    if (tpl.samples.size() != seg.samples.size()) continue;
    any_compatible = true;

    const auto [s_seg, s_tpl] = preprocess_pair(seg, tpl, cfg.filter, cfg.scale);
    if (s_seg.degenerate) {
      segment_flat = true;
      break;  // flat segment: tau undefined against every template
    }
    if (s_tpl.degenerate) continue;  // flat template carries no morphology

    const kendall::TauResult r =
        kendall::tau_fast(s_seg.values, s_tpl.values, cfg.variant, cfg.tail);
    if (!best_set || r.tau > best.tau ||
        (r.tau == best.tau && tpl.id < best_id)) {
      best = r;
      best_id = tpl.id;
      best_set = true;
    }
  }

  if (!any_compatible)
    raise(errc::no_compatible_template,
          "no template of length " + std::to_string(seg.samples.size()));

  if (segment_flat || !best_set) {
    out.tau = 0.0;
    out.z = 0.0;
    out.p = 1.0;
    out.positive = false;
    out.degenerate = true;
    return out;
  }

  out.tau = best.tau;
  out.z = best.z;
  out.p = best.p_value;
  out.best_template_id = best_id;
  out.positive = best.tau >= cfg.tau_threshold && best.p_value <= cfg.p_threshold;
  out.degenerate = false;
  return out;
}

ScanReport scan_recording(const Recording& rec,
                          const std::vector<Template>& templates,
                          const DetectorConfig& cfg) {
  validate_recording(rec);
  validate_detector_config(cfg);

  const std::vector<Template> pool = apply_patient_filter(templates, cfg);
  if (pool.empty())
    raise(errc::no_compatible_template,
          cfg.patient_filter
              ? "no templates for patient '" + *cfg.patient_filter + "'"
              : std::string("template set is empty"));

  std::map<std::size_t, std::vector<Template>> by_length;
  for (const Template& t : pool) by_length[t.samples.size()].push_back(t);

  ScanReport report;
  report.channels = rec.channels;
  report.sample_rate_hz = rec.sample_rate_hz;
  report.per_channel.resize(rec.num_channels());
  for (std::size_t ch = 0; ch < rec.num_channels(); ++ch)
    report.per_channel[ch].channel_index = ch;

  const std::size_t n = rec.num_samples();
  for (const auto& [L, group] : by_length) {
    if (n < L) {
      report.warnings.push_back("template length " + std::to_string(L) +
                                " exceeds recording length " +
                                std::to_string(n) + "; skipped");
      continue;
    }

    // whole_channel scope filters once up front; scoring then runs with an
    // identity filter on pre-filtered data (templates pre-filtered to match).
    DetectorConfig score_cfg = cfg;
    std::vector<Template> score_group = group;
    if (cfg.filter_scope == FilterScope::whole_channel) {
      score_cfg.filter.k = 1;
      for (Template& t : score_group)
        t.samples = moving_average(t.samples, cfg.filter);
    }

    for (std::size_t ch = 0; ch < rec.num_channels(); ++ch) {
      std::vector<Segment> segments;
      if (cfg.filter_scope == FilterScope::whole_channel) {
        const std::vector<double> filtered =
            moving_average(rec.data[ch], cfg.filter);
        segments = segment_channel(filtered, L, ch);
      } else {
        segments = segment_channel(rec.data[ch], L, ch);
      }
      for (const Segment& seg : segments) {
        DetectionResult row =
            score_segment(seg, score_group, score_cfg, rec.sample_rate_hz);
        report.per_channel[ch].segments += 1;
        if (row.positive) {
          report.per_channel[ch].positives += 1;
          report.positives += 1;
        }
        report.segments_scanned += 1;
        report.rows.push_back(std::move(row));
      }
    }
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const DetectionResult& a, const DetectionResult& b) {
              if (a.channel_index != b.channel_index)
                return a.channel_index < b.channel_index;
              if (a.segment_index != b.segment_index)
                return a.segment_index < b.segment_index;
              return a.window_len < b.window_len;
            });
  return report;
}

classify::ConfusionMatrix match_annotations(const ScanReport& report,
                                            const AnnotationSet& truth,
                                            double sample_rate_hz,
                                            double overlap_frac) {
  classify::ConfusionMatrix cm;
  for (const DetectionResult& row : report.rows) {
    const bool truth_pos =
        row_is_truth_positive(row, channel_label_of(report, row.channel_index),
                              truth, sample_rate_hz, overlap_frac);
    if (row.positive) {
      if (truth_pos)
        ++cm.tp;
      else
        ++cm.fp;
    } else {
      if (truth_pos)
        ++cm.fn;
      else
        ++cm.tn;
    }
  }
  return cm;
}

std::vector<FeaturePoint> truth_features(const ScanReport& report,
                                         const AnnotationSet& truth,
                                         double sample_rate_hz,
                                         double overlap_frac) {
  std::vector<FeaturePoint> features;
  features.reserve(report.rows.size());
  for (const DetectionResult& row : report.rows) {
    FeaturePoint fp;
    fp.tau = row.tau;
    fp.p = row.p;
    fp.swd =
        row_is_truth_positive(row, channel_label_of(report, row.channel_index),
                              truth, sample_rate_hz, overlap_frac);
    features.push_back(fp);
  }
  return features;
}

}  // namespace swd::detector
