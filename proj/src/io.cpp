#include "swd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "swd/error.hpp"

namespace swd::io {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g12_impl(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Round through the 12-significant-digit representation so JSON numbers
/// carry the same precision as the CSV writers.
double round_g12(double v) {
  const std::string s = format_g12_impl(v);
  return std::strtod(s.c_str(), nullptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    raise(errc::config_error, "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open: " + path);
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool try_parse_double(const std::string& field, double& out) {
  const std::string t = strip(field);
  if (t.empty()) return false;
  // from_chars does not accept "inf"; the ROC writer is the only inf source
  // and has no reader, so plain doubles suffice here.
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

double parse_double(const std::string& field, const std::string& path,
                    std::size_t line_no, const std::string& column) {
  double v = 0.0;
  if (!try_parse_double(field, v))
    raise(errc::parse_error, path + ":" + std::to_string(line_no) +
                                 ": cannot parse number in column '" +
                                 column + "': '" + strip(field) + "'");
  return v;
}

std::uint64_t parse_count(const std::string& field, const std::string& path,
                          std::size_t line_no, const std::string& column) {
  const std::string t = strip(field);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    raise(errc::parse_error, path + ":" + std::to_string(line_no) +
                                 ": cannot parse integer in column '" +
                                 column + "': '" + t + "'");
  return v;
}

std::vector<std::string> montage_labels(std::size_t count) {
  const auto& standard = default_channel_labels();
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (i < standard.size())
      labels.push_back(standard[i]);
    else
      labels.push_back("Ch" + std::to_string(i + 1));
  }
  return labels;
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    raise(errc::parse_error, path + ": malformed JSON");
  return j;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      raise(errc::parse_error,
            path + ": unknown key '" + where + key + "'");
  }
}

}  // namespace

std::string format_g12(double v) { return format_g12_impl(v); }

void write_recording_csv(const std::string& path, const Recording& rec) {
  validate_recording(rec);
  std::ofstream out = open_out(path);
  out << "t_s";
  for (const std::string& ch : rec.channels) out << ',' << ch;
  out << '\n';
  const std::size_t n = rec.num_samples();
  for (std::size_t i = 0; i < n; ++i) {
    out << format_g12(static_cast<double>(i) / rec.sample_rate_hz);
    for (const auto& row : rec.data) out << ',' << format_g12(row[i]);
    out << '\n';
  }
}

Recording read_recording_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;

  Recording rec;
  bool has_time = false;
  bool saw_header = false;
  std::vector<double> times;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_csv(t);

    if (rec.channels.empty() && !saw_header) {
      double probe;
      if (!try_parse_double(fields[0], probe)) {
        // Header row. A leading t_s column is the time axis.
        saw_header = true;
        std::size_t first_ch = 0;
        if (fields[0] == "t_s") {
          has_time = true;
          first_ch = 1;
        }
        if (fields.size() == first_ch)
          raise(errc::parse_error, path + ": header has no channel columns");
        for (std::size_t c = first_ch; c < fields.size(); ++c) {
          const std::string label = strip(fields[c]);
          if (label.empty())
            raise(errc::parse_error,
                  path + ": empty channel label in header");
          rec.channels.push_back(label);
        }
        width = fields.size();
        continue;
      }
      // Numeric first row: headerless, t_s mandatory as the first column.
      has_time = true;
      width = fields.size();
      if (width < 2)
        raise(errc::parse_error,
              path + ": headerless file needs t_s plus channel columns");
      rec.channels = montage_labels(width - 1);
      rec.data.resize(rec.channels.size());
    }

    if (rec.data.empty()) rec.data.resize(rec.channels.size());
    if (fields.size() != width)
      raise(errc::ragged_rows, path + ":" + std::to_string(line_no) +
                                   ": row has " +
                                   std::to_string(fields.size()) +
                                   " fields, expected " +
                                   std::to_string(width));
    std::size_t c = 0;
    if (has_time)
      times.push_back(parse_double(fields[c++], path, line_no, "t_s"));
    for (std::size_t m = 0; m < rec.data.size(); ++m, ++c)
      rec.data[m].push_back(
          parse_double(fields[c], path, line_no, rec.channels[m]));
  }

  if (rec.data.empty() || rec.data.front().empty())
    raise(errc::empty_recording, path + ": no samples");
  if (has_time && times.size() >= 2) {
    const double span = times.back() - times.front();
    if (!(span > 0.0))
      raise(errc::parse_error, path + ": t_s column is not increasing");
    rec.sample_rate_hz = static_cast<double>(times.size() - 1) / span;
  } else {
    rec.sample_rate_hz = 256.0;
  }
  validate_recording(rec);
  return rec;
}

void write_template_csv(const std::string& path, const Template& tpl) {
  std::ofstream out = open_out(path);
  if (tpl.patient_id) out << "# patient_id=" << *tpl.patient_id << '\n';
  for (double v : tpl.samples) out << format_g12(v) << '\n';
}

Template read_template_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  Template tpl;
  tpl.id = fs::path(path).stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string_view key = "# patient_id=";
      if (t.rfind("#", 0) == 0 && t.size() > key.size() &&
          t.compare(0, key.size(), key) == 0)
        tpl.patient_id = strip(t.substr(key.size()));
      continue;
    }
    tpl.samples.push_back(parse_double(t, path, line_no, "sample"));
  }
  if (tpl.samples.size() < 3)
    raise(errc::too_short,
          path + ": template needs >= 3 samples, got " +
              std::to_string(tpl.samples.size()));
  return tpl;
}

std::vector<Template> read_templates_dir(const std::string& dir) {
  if (!fs::is_directory(dir))
    raise(errc::parse_error, "not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<Template> templates;
  templates.reserve(paths.size());
  for (const auto& p : paths) templates.push_back(read_template_csv(p.string()));
  return templates;
}

void write_annotations_json(const std::string& path, const AnnotationSet& set) {
  json events = json::array();
  for (const AnnotationEvent& ev : set.events) {
    json e;
    if (ev.channel_label) e["channel"] = *ev.channel_label;
    e["start_s"] = round_g12(ev.start_s);
    e["end_s"] = round_g12(ev.end_s);
    e["label"] = ev.label;
    events.push_back(std::move(e));
  }
  std::ofstream out = open_out(path);
  out << json{{"events", std::move(events)}}.dump(2) << '\n';
}

AnnotationSet read_annotations_json(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("events") || !j["events"].is_array())
    raise(errc::parse_error, path + ": expected {\"events\": [...]}");
  reject_unknown_keys(j, path, "", {"events"});
  AnnotationSet set;
  std::size_t idx = 0;
  for (const json& e : j["events"]) {
    const std::string where = "events[" + std::to_string(idx++) + "].";
    if (!e.is_object())
      raise(errc::parse_error, path + ": " + where + " must be an object");
    reject_unknown_keys(e, path, where,
                        {"channel", "start_s", "end_s", "label"});
    AnnotationEvent ev;
    if (e.contains("channel")) {
      if (!e["channel"].is_string())
        raise(errc::parse_error, path + ": " + where + "channel must be a string");
      ev.channel_label = e["channel"].get<std::string>();
    }
    if (!e.contains("start_s") || !e["start_s"].is_number() ||
        !e.contains("end_s") || !e["end_s"].is_number())
      raise(errc::parse_error,
            path + ": " + where + "start_s and end_s must be numbers");
    ev.start_s = e["start_s"].get<double>();
    ev.end_s = e["end_s"].get<double>();
    if (e.contains("label")) {
      if (!e["label"].is_string())
        raise(errc::parse_error, path + ": " + where + "label must be a string");
      ev.label = e["label"].get<std::string>();
    }
    set.events.push_back(std::move(ev));
  }
  validate_annotations(set);
  return set;
}

void write_scan_report_csv(const std::string& path,
                           const detector::ScanReport& report) {
  std::ofstream out = open_out(path);
  out << "# sample_rate_hz=" << format_g12(report.sample_rate_hz) << '\n';
  out << "channel,segment,L,start_s,end_s,tau,z,p,best_template,positive,degenerate\n";
  for (const DetectionResult& row : report.rows) {
    const std::string& label = row.channel_index < report.channels.size()
                                   ? report.channels[row.channel_index]
                                   : std::to_string(row.channel_index);
    out << label << ',' << row.segment_index << ',' << row.window_len << ','
        << format_g12(row.start_s) << ',' << format_g12(row.end_s) << ','
        << format_g12(row.tau) << ',' << format_g12(row.z) << ','
        << format_g12(row.p) << ',' << row.best_template_id << ','
        << (row.positive ? 1 : 0) << ',' << (row.degenerate ? 1 : 0) << '\n';
  }
}

detector::ScanReport read_scan_report_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  detector::ScanReport report;
  std::map<std::string, std::size_t> channel_index;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  double comment_rate = 0.0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string key = "# sample_rate_hz=";
      if (t.size() > key.size() && t.compare(0, key.size(), key) == 0)
        comment_rate = parse_double(t.substr(key.size()), path, line_no,
                                    "sample_rate_hz");
      continue;
    }
    if (!saw_header) {
      if (t.rfind("channel,", 0) != 0)
        raise(errc::parse_error, path + ": missing scan report header");
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv(t);
    if (fields.size() != 11)
      raise(errc::parse_error, path + ":" + std::to_string(line_no) +
                                   ": expected 11 columns, got " +
                                   std::to_string(fields.size()));
    DetectionResult row;
    const std::string label = strip(fields[0]);
    auto [it, inserted] =
        channel_index.try_emplace(label, report.channels.size());
    if (inserted) report.channels.push_back(label);
    row.channel_index = it->second;
    row.segment_index = parse_count(fields[1], path, line_no, "segment");
    row.window_len = parse_count(fields[2], path, line_no, "L");
    row.start_s = parse_double(fields[3], path, line_no, "start_s");
    row.end_s = parse_double(fields[4], path, line_no, "end_s");
    row.tau = parse_double(fields[5], path, line_no, "tau");
    row.z = parse_double(fields[6], path, line_no, "z");
    row.p = parse_double(fields[7], path, line_no, "p");
    row.best_template_id = strip(fields[8]);
    row.positive = parse_count(fields[9], path, line_no, "positive") != 0;
    row.degenerate = parse_count(fields[10], path, line_no, "degenerate") != 0;
    report.rows.push_back(std::move(row));
  }
  if (!saw_header)
    raise(errc::parse_error, path + ": empty scan report");

  report.segments_scanned = report.rows.size();
  report.per_channel.resize(report.channels.size());
  for (std::size_t ch = 0; ch < report.channels.size(); ++ch)
    report.per_channel[ch].channel_index = ch;
  for (const DetectionResult& row : report.rows) {
    report.per_channel[row.channel_index].segments += 1;
    if (row.positive) {
      report.per_channel[row.channel_index].positives += 1;
      report.positives += 1;
    }
  }
  if (comment_rate > 0.0) {
    report.sample_rate_hz = comment_rate;
  } else if (!report.rows.empty()) {
    const DetectionResult& r0 = report.rows.front();
    const double dur = r0.end_s - r0.start_s;
    if (dur > 0.0 && r0.window_len > 0)
      report.sample_rate_hz = static_cast<double>(r0.window_len) / dur;
  }
  return report;
}

void write_detections_json(const std::string& path,
                           const detector::ScanReport& report) {
  json rows = json::array();
  for (const DetectionResult& row : report.rows) {
    if (!row.positive) continue;
    const std::string& label = row.channel_index < report.channels.size()
                                   ? report.channels[row.channel_index]
                                   : std::to_string(row.channel_index);
    rows.push_back({{"channel", label},
                    {"segment", row.segment_index},
                    {"L", row.window_len},
                    {"start_s", round_g12(row.start_s)},
                    {"end_s", round_g12(row.end_s)},
                    {"tau", round_g12(row.tau)},
                    {"z", round_g12(row.z)},
                    {"p", round_g12(row.p)},
                    {"best_template", row.best_template_id}});
  }
  std::ofstream out = open_out(path);
  out << json{{"detections", std::move(rows)}}.dump(2) << '\n';
}

void write_features_csv(const std::string& path,
                        const std::vector<FeaturePoint>& features) {
  std::ofstream out = open_out(path);
  out << "tau,p,label\n";
  for (const FeaturePoint& fp : features)
    out << format_g12(fp.tau) << ',' << format_g12(fp.p) << ','
        << (fp.swd ? 1 : 0) << '\n';
}

std::vector<FeaturePoint> read_features_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<FeaturePoint> features;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (!saw_header) {
      if (t.rfind("tau,", 0) != 0)
        raise(errc::parse_error,
              path + ": missing feature header tau,p,label");
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv(t);
    if (fields.size() != 3)
      raise(errc::parse_error, path + ":" + std::to_string(line_no) +
                                   ": expected 3 columns");
    FeaturePoint fp;
    fp.tau = parse_double(fields[0], path, line_no, "tau");
    fp.p = parse_double(fields[1], path, line_no, "p");
    fp.swd = parse_count(fields[2], path, line_no, "label") != 0;
    features.push_back(fp);
  }
  return features;
}

void write_roc_csv(const std::string& path, const classify::RocCurve& curve) {
  std::ofstream out = open_out(path);
  out << "threshold,fpr,tpr\n";
  for (const classify::RocPoint& pt : curve.points)
    out << format_g12(pt.threshold) << ',' << format_g12(pt.fpr) << ','
        << format_g12(pt.tpr) << '\n';
}

}  // namespace swd::io
