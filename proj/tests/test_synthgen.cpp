#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "swd/error.hpp"
#include "swd/synthgen.hpp"

using namespace swd::synth;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

std::size_t count_peaks_above(const std::vector<double>& v, double floor) {
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > floor) ++peaks;
  return peaks;
}

std::size_t count_zero_crossings(const std::vector<double>& v) {
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i - 1] < 0.0 && v[i] >= 0.0) || (v[i - 1] >= 0.0 && v[i] < 0.0))
      ++crossings;
  return crossings;
}

double lag1_autocorr(const std::vector<double>& v) {
  const double m = mean_of(v);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    num += (v[i] - m) * (v[i + 1] - m);
  for (const double x : v) den += (x - m) * (x - m);
  return num / den;
}

}  // namespace

TEST_CASE("SplitMix64 reproduces the published reference stream") {
  SplitMix64 zero(0);
  CHECK(zero.next() == 0xE220A8397B1DCDAFULL);
  CHECK(zero.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(zero.next() == 0x06C45D188009454FULL);

  SplitMix64 g(1234567);
  CHECK(g.next() == 0x599ED017FB08FC85ULL);
  CHECK(g.next() == 0x2C73F08458540FA5ULL);
  CHECK(g.next() == 0x883EBCE5A3F27C77ULL);
  CHECK(g.next() == 0x3FBEF740E9177B3FULL);
}

TEST_CASE("SplitMix64 derived draws stay inside their ranges") {
  SplitMix64 g(99);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double z = g.next_gauss();
    CHECK(z >= -6.0);
    CHECK(z <= 6.0);
  }
}

TEST_CASE("make_template length follows round(cycles * rate / freq)") {
  SynthConfig cfg;
  CHECK(make_template(cfg, 3).samples.size() == 307);
  CHECK(make_template(cfg, 1).samples.size() == 102);
  CHECK(make_template(cfg, 3).id == "swd_3cyc");

  SynthConfig fast_cfg;
  fast_cfg.sample_rate_hz = 512.0;
  fast_cfg.swd_freq_hz = 3.0;
  CHECK(make_template(fast_cfg, 5).samples.size() == 853);

  SynthConfig slow_cfg;
  slow_cfg.sample_rate_hz = 200.0;
  CHECK(make_template(slow_cfg, 3).samples.size() == 240);
}

TEST_CASE("make_template output is zero-mean and deterministic") {
  SynthConfig cfg;
  const auto a = make_template(cfg, 3);
  const auto b = make_template(cfg, 3);
  CHECK(a.samples == b.samples);
  CHECK(std::fabs(mean_of(a.samples)) <= 1e-12);
  CHECK(a.sample_rate_hz == cfg.sample_rate_hz);
}

TEST_CASE("make_template shows one spike per cycle above the wave trough") {
  SynthConfig cfg;
  for (const int cycles : {1, 2, 3, 5}) {
    const auto tpl = make_template(cfg, cycles);
    double mn = tpl.samples[0];
    for (const double v : tpl.samples) mn = std::min(mn, v);
    REQUIRE(mn < 0.0);
    CHECK(count_peaks_above(tpl.samples, 3.0 * std::fabs(mn)) ==
          static_cast<std::size_t>(cycles));
  }
}

TEST_CASE("make_template starts and ends abruptly at the baseline") {
  SynthConfig cfg;
  const auto tpl = make_template(cfg, 1);
  double mn = tpl.samples[0], mx = tpl.samples[0];
  for (const double v : tpl.samples) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(std::fabs(tpl.samples.front() - tpl.samples.back()) <=
        0.05 * (mx - mn));
}

TEST_CASE("template dominant frequency tracks swd_freq_hz within 10%") {
  SynthConfig cfg;
  for (const double freq : {1.0, 2.5, 3.0}) {
    cfg.swd_freq_hz = freq;
    for (const int cycles : {3, 6}) {
      const auto tpl = make_template(cfg, cycles);
      const double duration =
          static_cast<double>(tpl.samples.size()) / cfg.sample_rate_hz;
      const double estimated =
          static_cast<double>(count_zero_crossings(tpl.samples)) / 2.0 /
          duration;
      INFO("freq " << freq << " cycles " << cycles);
      CHECK(std::fabs(estimated - freq) <= 0.1 * freq);
    }
  }
}

TEST_CASE("make_recording is deterministic and honors dimensions") {
  SynthConfig cfg;
  cfg.num_channels = 4;
  cfg.duration_s = 10.0;
  cfg.seed = 271828;
  cfg.events.push_back({"F7", 3.5, 3});

  const auto [rec_a, ann_a] = make_recording(cfg);
  const auto [rec_b, ann_b] = make_recording(cfg);
  CHECK(rec_a.data == rec_b.data);
  CHECK(rec_a.num_channels() == 4);
  CHECK(rec_a.num_samples() == 2560);
  CHECK(rec_a.sample_rate_hz == 256.0);
  REQUIRE(ann_a.events.size() == 1);
  CHECK(ann_a.events[0].start_s == ann_b.events[0].start_s);

  SynthConfig other = cfg;
  other.seed = 1;
  const auto [rec_c, ann_c] = make_recording(other);
  CHECK(rec_c.data != rec_a.data);
}

TEST_CASE("annotations carry exact sample-aligned event boundaries") {
  SynthConfig cfg;
  cfg.num_channels = 22;
  cfg.duration_s = 20.0;
  cfg.events.push_back({"Cz", 10.0, 3});

  const auto [rec, ann] = make_recording(cfg);
  REQUIRE(ann.events.size() == 1);
  REQUIRE(ann.events[0].channel_label.has_value());
  CHECK(*ann.events[0].channel_label == "Cz");
  CHECK(ann.events[0].start_s == 10.0);          // 2560 / 256, exact
  CHECK(ann.events[0].end_s == 11.19921875);     // (2560 + 307) / 256, exact
  CHECK(ann.events[0].label == "SWD");
}

TEST_CASE("no events means pure noise and an empty annotation set") {
  SynthConfig cfg;
  cfg.num_channels = 2;
  cfg.duration_s = 4.0;
  const auto [rec, ann] = make_recording(cfg);
  CHECK(ann.events.empty());
  CHECK(rec.num_samples() == 1024);
}

TEST_CASE("event validation: unknown channel, bounds, overlap") {
  SynthConfig cfg;
  cfg.num_channels = 4;  // Fp1 Fp2 F7 F3
  cfg.duration_s = 10.0;

  cfg.events = {{"Cz", 1.0, 3}};
  try {
    make_recording(cfg);
    FAIL("expected unknown_channel");
  } catch (const swd::Error& e) {
    CHECK(e.code() == swd::errc::unknown_channel);
  }

  cfg.events = {{"Fp1", 9.5, 3}};  // 1.2 s burst does not fit
  try {
    make_recording(cfg);
    FAIL("expected event_out_of_bounds");
  } catch (const swd::Error& e) {
    CHECK(e.code() == swd::errc::event_out_of_bounds);
  }

  cfg.events = {{"Fp1", 2.0, 3}, {"Fp1", 2.5, 3}};
  try {
    make_recording(cfg);
    FAIL("expected overlapping_events");
  } catch (const swd::Error& e) {
    CHECK(e.code() == swd::errc::overlapping_events);
  }

  // Same span on different channels is fine.
  cfg.events = {{"Fp1", 2.0, 3}, {"Fp2", 2.0, 3}};
  CHECK_NOTHROW(make_recording(cfg));
}

TEST_CASE("config validation names the offending field") {
  SynthConfig cfg;

  cfg.duration_s = 0.0;
  try {
    validate_synth_config(cfg);
    FAIL("expected config_error");
  } catch (const swd::Error& e) {
    CHECK(e.code() == swd::errc::config_error);
    CHECK(std::string(e.what()).find("duration_s") != std::string::npos);
  }

  cfg = SynthConfig{};
  cfg.swd_freq_hz = 0.0;
  try {
    validate_synth_config(cfg);
    FAIL("expected config_error");
  } catch (const swd::Error& e) {
    CHECK(std::string(e.what()).find("swd_freq_hz") != std::string::npos);
  }

  cfg = SynthConfig{};
  cfg.num_channels = 0;
  CHECK_THROWS_AS(validate_synth_config(cfg), swd::Error);

  cfg = SynthConfig{};
  cfg.spike_width_ms = 500.0;  // longer than one 2.5 Hz cycle
  CHECK_THROWS_AS(validate_synth_config(cfg), swd::Error);

  cfg = SynthConfig{};
  cfg.events.push_back({"Cz", -1.0, 3});
  CHECK_THROWS_AS(validate_synth_config(cfg), swd::Error);

  cfg = SynthConfig{};
  cfg.events.push_back({"Cz", 1.0, 0});
  CHECK_THROWS_AS(validate_synth_config(cfg), swd::Error);
}

TEST_CASE("channel labels extend past the standard montage") {
  SynthConfig cfg;
  cfg.num_channels = 25;
  const auto labels = channel_labels(cfg);
  REQUIRE(labels.size() == 25);
  CHECK(labels[0] == "Fp1");
  CHECK(labels[21] == "FT9");
  CHECK(labels[22] == "Ch23");
  CHECK(labels[24] == "Ch25");

  cfg.num_channels = 3;
  const auto three = channel_labels(cfg);
  CHECK(three == std::vector<std::string>{"Fp1", "Fp2", "F7"});
}

TEST_CASE("pink noise is strongly lag-correlated, white noise is not") {
  SynthConfig cfg;
  cfg.num_channels = 1;
  cfg.duration_s = 30.0;
  cfg.noise_kind = NoiseKind::pink;
  const auto [pink_rec, pink_ann] = make_recording(cfg);
  const double pink_r1 = lag1_autocorr(pink_rec.data[0]);

  cfg.noise_kind = NoiseKind::white;
  const auto [white_rec, white_ann] = make_recording(cfg);
  const double white_r1 = lag1_autocorr(white_rec.data[0]);

  CHECK(pink_r1 > 0.5);
  CHECK(std::fabs(white_r1) < 0.1);
  CHECK(pink_rec.data[0] != white_rec.data[0]);
}
