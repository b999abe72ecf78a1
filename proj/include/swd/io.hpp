#pragma once

#include <string>
#include <vector>

#include "swd/classify.hpp"
#include "swd/detector.hpp"
#include "swd/signal_model.hpp"

namespace swd::io {

/// Floating-point serialization used by every writer: 12 significant digits.
std::string format_g12(double v);

/// Recording CSV: header `t_s,<ch1>,<ch2>,...`; one row per sample. A file
/// with a numeric first row is treated as headerless with t_s first and
/// standard montage labels. Sample rate is inferred from the t_s column.
void write_recording_csv(const std::string& path, const Recording& rec);
Recording read_recording_csv(const std::string& path);

/// Template CSV: one sample per line, `# patient_id=<id>` comment optional.
/// The template id is the file's stem.
void write_template_csv(const std::string& path, const Template& tpl);
Template read_template_csv(const std::string& path);

/// All *.csv templates in a directory, sorted by filename.
std::vector<Template> read_templates_dir(const std::string& dir);

void write_annotations_json(const std::string& path, const AnnotationSet& set);
AnnotationSet read_annotations_json(const std::string& path);

/// Scan report CSV: `# sample_rate_hz=<rate>` comment, then
/// channel,segment,L,start_s,end_s,tau,z,p,best_template,positive,degenerate.
void write_scan_report_csv(const std::string& path,
                           const detector::ScanReport& report);
detector::ScanReport read_scan_report_csv(const std::string& path);

/// Positive rows only, as JSON.
void write_detections_json(const std::string& path,
                           const detector::ScanReport& report);

/// Feature CSV: tau,p,label with label in {0, 1}.
void write_features_csv(const std::string& path,
                        const std::vector<FeaturePoint>& features);
std::vector<FeaturePoint> read_features_csv(const std::string& path);

/// ROC points CSV: threshold,fpr,tpr.
void write_roc_csv(const std::string& path, const classify::RocCurve& curve);

}  // namespace swd::io
