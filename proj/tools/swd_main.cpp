// Pipeline front end: synth -> detect -> evaluate -> classify, plus a tau
// kernel micro-benchmark. One subcommand per stage; every run is
// deterministic given its inputs. Exit codes: 0 ok, 2 input/config error,
// 3 incompatibility, 4 statistical degeneracy.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swd/classify.hpp"
#include "swd/detector.hpp"
#include "swd/error.hpp"
#include "swd/io.hpp"
#include "swd/kendall.hpp"
#include "swd/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct EvaluateOptions {
  double overlap_frac = 0.5;
  double ci_level = 0.95;
  swd::classify::CiMethod ci_method = swd::classify::CiMethod::normal;
};

struct RunConfig {
  swd::synth::SynthConfig synth;
  std::vector<int> template_cycles = {3};
  std::optional<std::string> template_patient_id;
  swd::detector::DetectorConfig detector;
  EvaluateOptions evaluate;
  std::string classify_kind = "all";
};

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  swd::raise(swd::errc::config_error, path + ": " + msg);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::string& section,
                 std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      config_fail(path, "unknown key '" + section + key + "'");
  }
}

double num_field(const json& obj, const std::string& path,
                 const std::string& section, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    config_fail(path, "'" + section + key + "' must be a number");
  return obj[key].get<double>();
}

std::string str_field(const json& obj, const std::string& path,
                      const std::string& section, const char* key,
                      const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    config_fail(path, "'" + section + key + "' must be a string");
  return obj[key].get<std::string>();
}

void load_synth_section(const json& s, const std::string& path, RunConfig& rc) {
  const std::string sec = "synth.";
  expect_keys(s, path, sec,
              {"seed", "sample_rate_hz", "swd_freq_hz", "spike_width_ms",
               "wave_amplitude_ratio", "noise_kind", "snr_db", "num_channels",
               "duration_s", "events", "template_cycles", "patient_id"});
  auto& cfg = rc.synth;
  if (s.contains("seed")) {
    if (!s["seed"].is_number_unsigned())
      config_fail(path, "'synth.seed' must be a non-negative integer");
    cfg.seed = s["seed"].get<std::uint64_t>();
  }
  cfg.sample_rate_hz = num_field(s, path, sec, "sample_rate_hz", cfg.sample_rate_hz);
  cfg.swd_freq_hz = num_field(s, path, sec, "swd_freq_hz", cfg.swd_freq_hz);
  cfg.spike_width_ms = num_field(s, path, sec, "spike_width_ms", cfg.spike_width_ms);
  cfg.wave_amplitude_ratio =
      num_field(s, path, sec, "wave_amplitude_ratio", cfg.wave_amplitude_ratio);
  const std::string noise = str_field(s, path, sec, "noise_kind", "pink");
  if (noise == "pink")
    cfg.noise_kind = swd::synth::NoiseKind::pink;
  else if (noise == "white")
    cfg.noise_kind = swd::synth::NoiseKind::white;
  else
    config_fail(path, "'synth.noise_kind' must be \"white\" or \"pink\"");
  cfg.snr_db = num_field(s, path, sec, "snr_db", cfg.snr_db);
  cfg.num_channels = static_cast<std::size_t>(
      num_field(s, path, sec, "num_channels", static_cast<double>(cfg.num_channels)));
  cfg.duration_s = num_field(s, path, sec, "duration_s", cfg.duration_s);
  if (s.contains("events")) {
    if (!s["events"].is_array())
      config_fail(path, "'synth.events' must be an array");
    cfg.events.clear();
    std::size_t idx = 0;
    for (const json& e : s["events"]) {
      const std::string esec = "synth.events[" + std::to_string(idx++) + "].";
      if (!e.is_object()) config_fail(path, "'" + esec + "' must be an object");
      expect_keys(e, path, esec, {"channel", "start_s", "cycles"});
      swd::synth::SynthEvent ev;
      ev.channel = str_field(e, path, esec, "channel", "");
      if (ev.channel.empty())
        config_fail(path, "'" + esec + "channel' is required");
      if (!e.contains("start_s"))
        config_fail(path, "'" + esec + "start_s' is required");
      ev.start_s = num_field(e, path, esec, "start_s", 0.0);
      ev.cycles = static_cast<int>(num_field(e, path, esec, "cycles", 3.0));
      cfg.events.push_back(std::move(ev));
    }
  }
  if (s.contains("template_cycles")) {
    if (!s["template_cycles"].is_array())
      config_fail(path, "'synth.template_cycles' must be an array of integers");
    rc.template_cycles.clear();
    for (const json& c : s["template_cycles"]) {
      if (!c.is_number_integer())
        config_fail(path, "'synth.template_cycles' must be an array of integers");
      rc.template_cycles.push_back(c.get<int>());
    }
  }
  if (s.contains("patient_id"))
    rc.template_patient_id = str_field(s, path, sec, "patient_id", "");
}

void load_detector_section(const json& d, const std::string& path,
                           RunConfig& rc) {
  const std::string sec = "detector.";
  expect_keys(d, path, sec,
              {"tau_threshold", "p_threshold", "k", "alpha", "beta",
               "template_aggregation", "patient_filter", "filter_scope",
               "variant", "tail"});
  auto& cfg = rc.detector;
  cfg.tau_threshold = num_field(d, path, sec, "tau_threshold", cfg.tau_threshold);
  cfg.p_threshold = num_field(d, path, sec, "p_threshold", cfg.p_threshold);
  cfg.filter.k = static_cast<std::size_t>(
      num_field(d, path, sec, "k", static_cast<double>(cfg.filter.k)));
  cfg.scale.alpha = num_field(d, path, sec, "alpha", cfg.scale.alpha);
  cfg.scale.beta = num_field(d, path, sec, "beta", cfg.scale.beta);
  const std::string agg =
      str_field(d, path, sec, "template_aggregation", "max_tau");
  if (agg != "max_tau")
    config_fail(path, "'detector.template_aggregation' must be \"max_tau\"");
  if (d.contains("patient_filter"))
    cfg.patient_filter = str_field(d, path, sec, "patient_filter", "");
  const std::string scope =
      str_field(d, path, sec, "filter_scope", "per_segment");
  if (scope == "per_segment")
    cfg.filter_scope = swd::detector::FilterScope::per_segment;
  else if (scope == "whole_channel")
    cfg.filter_scope = swd::detector::FilterScope::whole_channel;
  else
    config_fail(path,
                "'detector.filter_scope' must be \"per_segment\" or "
                "\"whole_channel\"");
  const std::string variant = str_field(d, path, sec, "variant", "tau_b");
  if (variant == "tau_a")
    cfg.variant = swd::kendall::TauVariant::tau_a;
  else if (variant == "tau_b")
    cfg.variant = swd::kendall::TauVariant::tau_b;
  else
    config_fail(path, "'detector.variant' must be \"tau_a\" or \"tau_b\"");
  const std::string tail = str_field(d, path, sec, "tail", "two_sided");
  if (tail == "two_sided")
    cfg.tail = swd::kendall::Tail::two_sided;
  else if (tail == "one_sided")
    cfg.tail = swd::kendall::Tail::one_sided;
  else
    config_fail(path, "'detector.tail' must be \"two_sided\" or \"one_sided\"");
}

void load_evaluate_section(const json& e, const std::string& path,
                           RunConfig& rc) {
  const std::string sec = "evaluate.";
  expect_keys(e, path, sec, {"overlap_frac", "ci_level", "ci_method"});
  rc.evaluate.overlap_frac =
      num_field(e, path, sec, "overlap_frac", rc.evaluate.overlap_frac);
  rc.evaluate.ci_level = num_field(e, path, sec, "ci_level", rc.evaluate.ci_level);
  const std::string method = str_field(e, path, sec, "ci_method", "normal");
  if (method == "normal")
    rc.evaluate.ci_method = swd::classify::CiMethod::normal;
  else if (method == "wilson")
    rc.evaluate.ci_method = swd::classify::CiMethod::wilson;
  else
    config_fail(path, "'evaluate.ci_method' must be \"normal\" or \"wilson\"");
}

RunConfig load_run_config(const std::string& path) {
  RunConfig rc;
  if (path.empty()) return rc;
  std::ifstream in(path);
  if (!in) swd::raise(swd::errc::config_error, "cannot open config: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    swd::raise(swd::errc::config_error, path + ": malformed JSON");
  if (!j.is_object()) config_fail(path, "top level must be an object");
  expect_keys(j, path, "", {"synth", "detector", "evaluate", "classify"});
  if (j.contains("synth")) load_synth_section(j["synth"], path, rc);
  if (j.contains("detector")) load_detector_section(j["detector"], path, rc);
  if (j.contains("evaluate")) load_evaluate_section(j["evaluate"], path, rc);
  if (j.contains("classify")) {
    expect_keys(j["classify"], path, "classify.", {"kind"});
    rc.classify_kind = str_field(j["classify"], path, "classify.", "kind", "all");
  }
  return rc;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    swd::raise(swd::errc::config_error,
               "cannot create output directory: " + dir);
}

json metrics_block(const swd::classify::ConfusionMatrix& cm,
                   const EvaluateOptions& opts) {
  const auto [sens, spec] = swd::classify::metrics(cm);
  const auto [spec_lo, spec_hi] = swd::classify::proportion_ci(
      spec, cm.tn + cm.fp, opts.ci_level, opts.ci_method);
  const auto [sens_lo, sens_hi] = swd::classify::proportion_ci(
      sens, cm.tp + cm.fn, opts.ci_level, opts.ci_method);
  const auto g12 = [](double v) {
    return std::strtod(swd::io::format_g12(v).c_str(), nullptr);
  };
  return json{{"tp", cm.tp},
              {"fp", cm.fp},
              {"tn", cm.tn},
              {"fn", cm.fn},
              {"sensitivity", g12(sens)},
              {"specificity", g12(spec)},
              {"ci_lo", g12(spec_lo)},
              {"ci_hi", g12(spec_hi)},
              {"sensitivity_ci_lo", g12(sens_lo)},
              {"sensitivity_ci_hi", g12(sens_hi)}};
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out)
    swd::raise(swd::errc::config_error, "cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

int cmd_synth(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  RunConfig rc = load_run_config(config_path);
  if (seed_override) rc.synth.seed = *seed_override;
  swd::synth::validate_synth_config(rc.synth);
  if (rc.template_cycles.empty())
    swd::raise(swd::errc::config_error,
               "synth config: template_cycles must not be empty");

  ensure_dir(out_dir);
  ensure_dir(out_dir + "/templates");

  const auto [rec, ann] = swd::synth::make_recording(rc.synth);
  swd::io::write_recording_csv(out_dir + "/recording.csv", rec);
  swd::io::write_annotations_json(out_dir + "/annotations.json", ann);
  for (int cycles : rc.template_cycles) {
    swd::Template tpl = swd::synth::make_template(rc.synth, cycles);
    tpl.patient_id = rc.template_patient_id;
    swd::io::write_template_csv(
        out_dir + "/templates/" + tpl.id + ".csv", tpl);
  }
  std::cout << "wrote " << out_dir << "/recording.csv (" << rec.num_channels()
            << " channels, " << rec.num_samples() << " samples), "
            << rc.template_cycles.size() << " template(s), "
            << ann.events.size() << " annotated event(s)\n";
  return 0;
}

int cmd_detect(const std::string& recording_path, const std::string& templates_dir,
               const std::string& config_path, const std::string& out_dir,
               const std::optional<std::string>& patient) {
  RunConfig rc = load_run_config(config_path);
  if (patient) rc.detector.patient_filter = patient;

  const swd::Recording rec = swd::io::read_recording_csv(recording_path);
  std::vector<swd::Template> templates =
      swd::io::read_templates_dir(templates_dir);
  if (templates.empty())
    swd::raise(swd::errc::no_compatible_template,
               "no templates in " + templates_dir);
  for (swd::Template& t : templates) t.sample_rate_hz = rec.sample_rate_hz;

  const swd::detector::ScanReport report =
      swd::detector::scan_recording(rec, templates, rc.detector);
  for (const std::string& w : report.warnings)
    std::cerr << "warning: " << w << '\n';

  ensure_dir(out_dir);
  swd::io::write_scan_report_csv(out_dir + "/scan_report.csv", report);
  swd::io::write_detections_json(out_dir + "/detections.json", report);
  std::cout << "scanned=" << report.segments_scanned
            << " positives=" << report.positives << '\n';
  return 0;
}

int cmd_evaluate(const std::string& report_path, const std::string& annotations_path,
                 const std::string& config_path, const std::string& out_dir,
                 std::optional<double> overlap_override) {
  RunConfig rc = load_run_config(config_path);
  if (overlap_override) rc.evaluate.overlap_frac = *overlap_override;

  const swd::detector::ScanReport report =
      swd::io::read_scan_report_csv(report_path);
  const swd::AnnotationSet truth =
      swd::io::read_annotations_json(annotations_path);
  for (const swd::AnnotationEvent& ev : truth.events) {
    if (!ev.channel_label) continue;
    if (std::find(report.channels.begin(), report.channels.end(),
                  *ev.channel_label) == report.channels.end())
      swd::raise(swd::errc::unknown_channel,
                 "annotation references channel '" + *ev.channel_label +
                     "' absent from the scan report");
  }

  const auto cm = swd::detector::match_annotations(
      report, truth, report.sample_rate_hz, rc.evaluate.overlap_frac);
  const auto features = swd::detector::truth_features(
      report, truth, report.sample_rate_hz, rc.evaluate.overlap_frac);

  std::vector<std::pair<double, bool>> scores;
  scores.reserve(features.size());
  for (const swd::FeaturePoint& fp : features) scores.emplace_back(fp.tau, fp.swd);
  const swd::classify::RocCurve curve = swd::classify::roc(scores);

  ensure_dir(out_dir);
  json m = metrics_block(cm, rc.evaluate);
  m["kind"] = "threshold";
  m["auc"] = std::strtod(swd::io::format_g12(curve.auc).c_str(), nullptr);
  write_json_file(out_dir + "/metrics.json", m);
  swd::io::write_roc_csv(out_dir + "/roc.csv", curve);
  swd::io::write_features_csv(out_dir + "/features.csv", features);

  const auto [sens, spec] = swd::classify::metrics(cm);
  std::cout << "sensitivity=" << swd::io::format_g12(sens)
            << " specificity=" << swd::io::format_g12(spec)
            << " auc=" << swd::io::format_g12(curve.auc) << '\n';
  return 0;
}

swd::classify::Kind kind_from_name(const std::string& name) {
  if (name == "lda") return swd::classify::Kind::lda;
  if (name == "qda") return swd::classify::Kind::qda;
  if (name == "svm") return swd::classify::Kind::linear_svm;
  swd::raise(swd::errc::config_error,
             "--kind must be lda, qda, svm, or all, got '" + name + "'");
}

int cmd_classify(const std::string& features_path, const std::string& kind_name,
                 const std::string& config_path, const std::string& out_dir) {
  RunConfig rc = load_run_config(config_path);
  const std::string kind = kind_name.empty() ? rc.classify_kind : kind_name;

  const std::vector<swd::FeaturePoint> data =
      swd::io::read_features_csv(features_path);

  std::vector<std::string> kinds;
  if (kind == "all")
    kinds = {"lda", "qda", "svm"};
  else
    kinds = {kind};

  json reports = json::array();
  for (const std::string& k : kinds) {
    const swd::classify::LoocvResult r =
        swd::classify::leave_one_out(kind_from_name(k), data);
    std::vector<std::pair<double, bool>> scores;
    scores.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      scores.emplace_back(r.scores[i], data[i].swd);
    const swd::classify::RocCurve curve = swd::classify::roc(scores);

    json block = metrics_block(r.cm, rc.evaluate);
    block["kind"] = k;
    block["auc"] = std::strtod(swd::io::format_g12(curve.auc).c_str(), nullptr);
    block["abstentions"] = r.abstentions;
    reports.push_back(std::move(block));

    const auto [sens, spec] = swd::classify::metrics(r.cm);
    std::cout << k << ": sensitivity=" << swd::io::format_g12(sens)
              << " specificity=" << swd::io::format_g12(spec)
              << " auc=" << swd::io::format_g12(curve.auc) << '\n';
  }

  ensure_dir(out_dir);
  write_json_file(out_dir + "/loocv_report.json", json{{"reports", reports}});
  return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    const std::string token = csv.substr(start, comma - start);
    start = comma + 1;
    if (token.empty()) continue;
    std::size_t n = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), n);
    if (ec != std::errc() || ptr != token.data() + token.size() || n < 2)
      swd::raise(swd::errc::config_error,
                 "--sizes entries must be integers >= 2, got '" + token + "'");
    sizes.push_back(n);
  }
  return sizes;
}

int cmd_bench(const std::vector<std::size_t>& sizes, const std::string& out_dir) {
  using clock = std::chrono::steady_clock;

  json results = json::array();
  bool gap_ok = true;
  for (const std::size_t n : sizes) {
    swd::synth::SplitMix64 rng(0x5eedULL ^ n);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.next_unit();
    for (double& v : y) v = rng.next_unit();

    const int reps = n <= 256 ? 51 : (n <= 1024 ? 21 : 7);
    const auto median_ns = [&](auto&& body) {
      std::vector<double> times;
      times.reserve(static_cast<std::size_t>(reps));
      for (int r = 0; r < reps; ++r) {
        const auto t0 = clock::now();
        body();
        const auto t1 = clock::now();
        times.push_back(
            std::chrono::duration<double, std::nano>(t1 - t0).count());
      }
      std::sort(times.begin(), times.end());
      return times[times.size() / 2];
    };

    volatile double sink = 0.0;
    const double brute_ns = median_ns([&] {
      sink = swd::kendall::tau_bruteforce(x, y).tau;
    });
    const double fast_ns = median_ns([&] {
      sink = swd::kendall::tau_fast(x, y).tau;
    });
    (void)sink;

    const double speedup = brute_ns / fast_ns;
    if (n >= 1024 && fast_ns > brute_ns) gap_ok = false;
    results.push_back({{"n", n},
                       {"brute_ns", brute_ns},
                       {"fast_ns", fast_ns},
                       {"speedup", speedup}});
    std::printf("n=%zu brute=%.0fns fast=%.0fns speedup=%.1fx\n", n, brute_ns,
                fast_ns, speedup);
  }

  ensure_dir(out_dir);
  write_json_file(out_dir + "/bench.json", json{{"results", results}});
  if (!gap_ok) {
    std::cerr << "error: fast path slower than brute force at n >= 1024\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-and-wave discharge detection toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> patient;
  std::optional<double> overlap;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--config", config_path, "run config JSON");
  synth->add_option("--out", out_dir, "output directory");
  std::uint64_t seed_value = 0;
  auto* seed_opt = synth->add_option("--seed", seed_value, "override synth seed");

  std::string recording_path, templates_dir;
  auto* detect = app.add_subcommand("detect", "scan a recording for SWD");
  detect->add_option("recording", recording_path, "recording CSV")->required();
  detect->add_option("templates", templates_dir, "template directory")->required();
  detect->add_option("--config", config_path, "run config JSON");
  detect->add_option("--out", out_dir, "output directory");
  std::string patient_value;
  auto* patient_opt =
      detect->add_option("--patient", patient_value, "score only this patient's templates");

  std::string report_path, annotations_path;
  auto* evaluate = app.add_subcommand("evaluate", "score a scan against annotations");
  evaluate->add_option("scan_report", report_path, "scan report CSV")->required();
  evaluate->add_option("annotations", annotations_path, "annotation JSON")->required();
  evaluate->add_option("--config", config_path, "run config JSON");
  evaluate->add_option("--out", out_dir, "output directory");
  double overlap_value = 0.5;
  auto* overlap_opt =
      evaluate->add_option("--overlap-frac", overlap_value,
                           "truth overlap fraction (default 0.5)");

  std::string features_path, kind_name;
  auto* classify = app.add_subcommand("classify", "leave-one-out classifier report");
  classify->add_option("features", features_path, "feature CSV")->required();
  classify->add_option("--kind", kind_name, "lda|qda|svm|all");
  classify->add_option("--config", config_path, "run config JSON");
  classify->add_option("--out", out_dir, "output directory");

  std::string sizes_csv = "64,256,1024,4096";
  auto* bench = app.add_subcommand("bench", "tau kernel benchmark");
  bench->add_option("--sizes", sizes_csv,
                    "comma-separated vector lengths to time (empty for none)");
  bench->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*seed_opt) seed = seed_value;
  if (*patient_opt) patient = patient_value;
  if (*overlap_opt) overlap = overlap_value;

  try {
    if (synth->parsed()) return cmd_synth(config_path, out_dir, seed);
    if (detect->parsed())
      return cmd_detect(recording_path, templates_dir, config_path, out_dir,
                        patient);
    if (evaluate->parsed())
      return cmd_evaluate(report_path, annotations_path, config_path, out_dir,
                          overlap);
    if (classify->parsed())
      return cmd_classify(features_path, kind_name, config_path, out_dir);
    if (bench->parsed()) return cmd_bench(parse_sizes(sizes_csv), out_dir);
  } catch (const swd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swd::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
