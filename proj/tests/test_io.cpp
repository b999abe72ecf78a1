#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <doctest.h>

#include "support/test_support.hpp"
#include "swd/detector.hpp"
#include "swd/error.hpp"
#include "swd/io.hpp"
#include "swd/synthgen.hpp"

using namespace swd;
using testsup::ScratchDir;

TEST_CASE("format_g12 keeps 12 significant digits") {
  CHECK(io::format_g12(1.0) == "1");
  CHECK(io::format_g12(0.5) == "0.5");
  CHECK(io::format_g12(-3.25) == "-3.25");
  CHECK(io::format_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_g12(1234567890123.0) == "1.23456789012e+12");
  CHECK(io::format_g12(1e-300) == "1e-300");
  CHECK(io::format_g12(0.0) == "0");
}

TEST_CASE("recording csv round-trips channels, samples, and rate") {
  ScratchDir scratch("rec_csv");
  Recording rec;
  rec.channels = {"Fp1", "Cz"};
  rec.sample_rate_hz = 256.0;
  rec.data = {{0.125, -1.5, 2.75, 0.0625}, {1e-4, 3.14159265358979, -7.0, 42.0}};

  const std::string path = scratch.str("rec.csv");
  io::write_recording_csv(path, rec);

  const std::string text = testsup::read_file(path);
  CHECK(text.rfind("t_s,Fp1,Cz\n", 0) == 0);

  const Recording back = io::read_recording_csv(path);
  CHECK(back.channels == rec.channels);
  REQUIRE(back.data.size() == 2);
  REQUIRE(back.data[0].size() == 4);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(back.data[m][i] ==
            doctest::Approx(rec.data[m][i]).epsilon(1e-9));
  CHECK(back.sample_rate_hz == doctest::Approx(256.0).epsilon(1e-6));
}

TEST_CASE("a numeric first row means headerless with montage labels") {
  ScratchDir scratch("rec_headerless");
  const std::string path = scratch.str("raw.csv");
  testsup::write_file(path,
                      "0,1.5,2.5,3.5\n"
                      "0.00390625,4.5,5.5,6.5\n"
                      "0.0078125,7.5,8.5,9.5\n");
  const Recording rec = io::read_recording_csv(path);
  REQUIRE(rec.channels.size() == 3);
  CHECK(rec.channels[0] == "Fp1");
  CHECK(rec.channels[1] == "Fp2");
  CHECK(rec.data[0] == std::vector<double>{1.5, 4.5, 7.5});
  CHECK(rec.sample_rate_hz == doctest::Approx(256.0).epsilon(1e-9));
}

TEST_CASE("a header without t_s treats every column as a channel") {
  ScratchDir scratch("rec_nots");
  const std::string path = scratch.str("raw.csv");
  testsup::write_file(path, "a,b\n1,2\n3,4\n");
  const Recording rec = io::read_recording_csv(path);
  CHECK(rec.channels == std::vector<std::string>{"a", "b"});
  CHECK(rec.data[0] == std::vector<double>{1.0, 3.0});
  CHECK(rec.sample_rate_hz == 256.0);  // no time axis: default rate
}

TEST_CASE("recording csv parse failures carry the line number") {
  ScratchDir scratch("rec_bad");
  const std::string ragged = scratch.str("ragged.csv");
  testsup::write_file(ragged, "t_s,Fp1\n0,1\n0.1,2,3\n");
  try {
    io::read_recording_csv(ragged);
    FAIL("expected ragged_rows");
  } catch (const Error& e) {
    CHECK(e.code() == errc::ragged_rows);
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }

  const std::string garbled = scratch.str("garbled.csv");
  testsup::write_file(garbled, "t_s,Fp1\n0,1\n0.1,zap\n");
  try {
    io::read_recording_csv(garbled);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find("zap") != std::string::npos);
  }

  const std::string empty = scratch.str("empty.csv");
  testsup::write_file(empty, "t_s,Fp1\n");
  CHECK_THROWS_AS(io::read_recording_csv(empty), Error);

  CHECK_THROWS_AS(io::read_recording_csv(scratch.str("missing.csv")), Error);
}

TEST_CASE("non-increasing time axis is rejected") {
  ScratchDir scratch("rec_time");
  const std::string path = scratch.str("back.csv");
  testsup::write_file(path, "t_s,Fp1\n1.0,1\n0.5,2\n");
  try {
    io::read_recording_csv(path);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }
}

TEST_CASE("template csv round-trips samples and the patient comment") {
  ScratchDir scratch("tpl_csv");
  Template tpl;
  tpl.id = "ignored_on_write";
  tpl.patient_id = "p7";
  tpl.samples = {0.25, -1.0, 0.75, 0.125};

  const std::string path = scratch.str("spike3.csv");
  io::write_template_csv(path, tpl);
  CHECK(testsup::read_file(path).rfind("# patient_id=p7\n", 0) == 0);

  const Template back = io::read_template_csv(path);
  CHECK(back.id == "spike3");  // id comes from the file stem
  REQUIRE(back.patient_id.has_value());
  CHECK(*back.patient_id == "p7");
  REQUIRE(back.samples.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(back.samples[i] == doctest::Approx(tpl.samples[i]).epsilon(1e-9));
}

TEST_CASE("template without the comment has no patient id") {
  ScratchDir scratch("tpl_anon");
  const std::string path = scratch.str("anon.csv");
  testsup::write_file(path, "1\n2\n3\n");
  const Template tpl = io::read_template_csv(path);
  CHECK_FALSE(tpl.patient_id.has_value());
  CHECK(tpl.samples == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("templates need at least three samples") {
  ScratchDir scratch("tpl_short");
  const std::string path = scratch.str("tiny.csv");
  testsup::write_file(path, "1\n2\n");
  try {
    io::read_template_csv(path);
    FAIL("expected too_short");
  } catch (const Error& e) {
    CHECK(e.code() == errc::too_short);
  }
}

TEST_CASE("read_templates_dir returns csv files sorted by name") {
  ScratchDir scratch("tpl_dir");
  testsup::write_file(scratch.str("b.csv"), "1\n2\n3\n");
  testsup::write_file(scratch.str("a.csv"), "4\n5\n6\n");
  testsup::write_file(scratch.str("notes.txt"), "not a template");
  const auto templates = io::read_templates_dir(scratch.str());
  REQUIRE(templates.size() == 2);
  CHECK(templates[0].id == "a");
  CHECK(templates[1].id == "b");

  CHECK_THROWS_AS(io::read_templates_dir(scratch.str("nope")), Error);
}

TEST_CASE("annotations json round-trips, with and without channel") {
  ScratchDir scratch("ann_json");
  AnnotationSet set;
  set.events.push_back({std::string("Cz"), 1.25, 2.5, "SWD"});
  set.events.push_back({std::nullopt, 10.0, 11.5, "SWD"});

  const std::string path = scratch.str("ann.json");
  io::write_annotations_json(path, set);
  const AnnotationSet back = io::read_annotations_json(path);
  REQUIRE(back.events.size() == 2);
  CHECK(back.events[0].channel_label == std::string("Cz"));
  CHECK(back.events[0].start_s == 1.25);
  CHECK(back.events[0].end_s == 2.5);
  CHECK(back.events[0].label == "SWD");
  CHECK_FALSE(back.events[1].channel_label.has_value());
}

TEST_CASE("annotation reader rejects unknown keys with their path") {
  ScratchDir scratch("ann_strict");
  const std::string path = scratch.str("extra.json");
  testsup::write_file(path,
                      R"({"events": [{"start_s": 1, "end_s": 2, "onset": 5}]})");
  try {
    io::read_annotations_json(path);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find("events[0].onset") != std::string::npos);
  }

  const std::string top = scratch.str("top.json");
  testsup::write_file(top, R"({"events": [], "version": 2})");
  CHECK_THROWS_AS(io::read_annotations_json(top), Error);
}

TEST_CASE("annotation reader validates shape and times") {
  ScratchDir scratch("ann_bad");
  const std::string malformed = scratch.str("malformed.json");
  testsup::write_file(malformed, "{nope");
  try {
    io::read_annotations_json(malformed);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }

  const std::string no_events = scratch.str("no_events.json");
  testsup::write_file(no_events, R"({"items": []})");
  CHECK_THROWS_AS(io::read_annotations_json(no_events), Error);

  const std::string reversed = scratch.str("reversed.json");
  testsup::write_file(reversed,
                      R"({"events": [{"start_s": 5, "end_s": 2}]})");
  CHECK_THROWS_AS(io::read_annotations_json(reversed), Error);

  const std::string non_numeric = scratch.str("nn.json");
  testsup::write_file(non_numeric,
                      R"({"events": [{"start_s": "1", "end_s": 2}]})");
  CHECK_THROWS_AS(io::read_annotations_json(non_numeric), Error);
}

TEST_CASE("scan report csv round-trips rows and recomputes totals") {
  ScratchDir scratch("scan_csv");

  synth::SynthConfig cfg;
  cfg.num_channels = 2;
  cfg.duration_s = 8.0;
  cfg.seed = 11;
  cfg.snr_db = 40.0;
  cfg.events.push_back({"Fp1", 614.0 / 256.0, 3});
  const auto [rec, ann] = synth::make_recording(cfg);
  const Template tpl = synth::make_template(cfg, 3);
  const detector::ScanReport report =
      detector::scan_recording(rec, {tpl}, detector::DetectorConfig{});

  const std::string path = scratch.str("scan.csv");
  io::write_scan_report_csv(path, report);
  const std::string text = testsup::read_file(path);
  CHECK(text.rfind("# sample_rate_hz=256\n", 0) == 0);
  CHECK(text.find("channel,segment,L,start_s,end_s,tau,z,p,best_template,"
                  "positive,degenerate\n") != std::string::npos);

  const detector::ScanReport back = io::read_scan_report_csv(path);
  CHECK(back.sample_rate_hz == 256.0);
  CHECK(back.channels == report.channels);
  CHECK(back.segments_scanned == report.segments_scanned);
  CHECK(back.positives == report.positives);
  REQUIRE(back.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].channel_index == report.rows[i].channel_index);
    CHECK(back.rows[i].segment_index == report.rows[i].segment_index);
    CHECK(back.rows[i].window_len == report.rows[i].window_len);
    CHECK(back.rows[i].tau ==
          doctest::Approx(report.rows[i].tau).epsilon(1e-9));
    CHECK(back.rows[i].p == doctest::Approx(report.rows[i].p).epsilon(1e-9));
    CHECK(back.rows[i].positive == report.rows[i].positive);
    CHECK(back.rows[i].degenerate == report.rows[i].degenerate);
    CHECK(back.rows[i].best_template_id == report.rows[i].best_template_id);
  }
  REQUIRE(back.per_channel.size() == report.per_channel.size());
  for (std::size_t ch = 0; ch < back.per_channel.size(); ++ch) {
    CHECK(back.per_channel[ch].segments == report.per_channel[ch].segments);
    CHECK(back.per_channel[ch].positives == report.per_channel[ch].positives);
  }
}

TEST_CASE("scan report reader rejects malformed input") {
  ScratchDir scratch("scan_bad");
  const std::string no_header = scratch.str("no_header.csv");
  testsup::write_file(no_header, "Fp1,0,307,0,1.2,0.5,1,0.05,t,1,0\n");
  try {
    io::read_scan_report_csv(no_header);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }

  const std::string short_row = scratch.str("short_row.csv");
  testsup::write_file(
      short_row,
      "channel,segment,L,start_s,end_s,tau,z,p,best_template,positive,"
      "degenerate\nFp1,0,307\n");
  CHECK_THROWS_AS(io::read_scan_report_csv(short_row), Error);
}

TEST_CASE("detections json holds positive rows only") {
  ScratchDir scratch("det_json");
  detector::ScanReport report;
  report.channels = {"Fp1"};
  report.sample_rate_hz = 256.0;
  DetectionResult pos;
  pos.window_len = 307;
  pos.start_s = 0.0;
  pos.end_s = 307.0 / 256.0;
  pos.tau = 0.9;
  pos.z = 5.0;
  pos.p = 1e-6;
  pos.best_template_id = "swd_3cyc";
  pos.positive = true;
  DetectionResult neg = pos;
  neg.segment_index = 1;
  neg.positive = false;
  report.rows = {pos, neg};

  const std::string path = scratch.str("detections.json");
  io::write_detections_json(path, report);
  const nlohmann::json j = testsup::load_json(path);
  REQUIRE(j.contains("detections"));
  REQUIRE(j["detections"].size() == 1);
  CHECK(j["detections"][0]["channel"] == "Fp1");
  CHECK(j["detections"][0]["tau"] == 0.9);
  CHECK(j["detections"][0]["best_template"] == "swd_3cyc");

  const auto errors = testsup::validate_against_schema(
      j, testsup::schema_path("detections.schema.json"));
  CHECK(errors == std::vector<std::string>{});
}

TEST_CASE("features csv round-trips exactly at 12 digits") {
  ScratchDir scratch("feat_csv");
  const std::vector<FeaturePoint> features = {
      {0.9, 0.0012345, true}, {-0.25, 1.0, false}, {0.0, 0.5, false}};
  const std::string path = scratch.str("features.csv");
  io::write_features_csv(path, features);
  CHECK(testsup::read_file(path).rfind("tau,p,label\n", 0) == 0);

  const auto back = io::read_features_csv(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].tau == doctest::Approx(features[i].tau).epsilon(1e-9));
    CHECK(back[i].p == doctest::Approx(features[i].p).epsilon(1e-9));
    CHECK(back[i].swd == features[i].swd);
  }
}

TEST_CASE("roc csv lists the sweep points under a fixed header") {
  ScratchDir scratch("roc_csv");
  classify::RocCurve curve;
  curve.points = {{std::numeric_limits<double>::infinity(), 0.0, 0.0},
                  {0.9, 0.0, 0.5},
                  {0.1, 1.0, 1.0}};
  curve.auc = 0.75;
  const std::string path = scratch.str("roc.csv");
  io::write_roc_csv(path, curve);
  const std::string text = testsup::read_file(path);
  CHECK(text == "threshold,fpr,tpr\ninf,0,0\n0.9,0,0.5\n0.1,1,1\n");
}

TEST_CASE("annotations written by synth validate against the schema") {
  ScratchDir scratch("ann_schema");
  synth::SynthConfig cfg;
  cfg.num_channels = 2;
  cfg.duration_s = 8.0;
  cfg.events.push_back({"Fp1", 1.0, 3});
  const auto [rec, ann] = synth::make_recording(cfg);
  const std::string path = scratch.str("ann.json");
  io::write_annotations_json(path, ann);
  const auto errors = testsup::validate_against_schema(
      testsup::load_json(path), testsup::schema_path("annotations.schema.json"));
  CHECK(errors == std::vector<std::string>{});
}
