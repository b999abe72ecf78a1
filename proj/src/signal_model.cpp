#include "swd/signal_model.hpp"

#include <string>

#include "swd/error.hpp"

namespace swd {

void validate_recording(const Recording& rec) {
  if (rec.data.empty() || rec.data.front().empty())
    raise(errc::empty_recording, "recording has no samples");
  if (rec.channels.size() != rec.data.size())
    raise(errc::ragged_rows,
          "channel label count (" + std::to_string(rec.channels.size()) +
              ") != data row count (" + std::to_string(rec.data.size()) + ")");
  const std::size_t n = rec.data.front().size();
  for (std::size_t m = 1; m < rec.data.size(); ++m) {
    if (rec.data[m].size() != n)
      raise(errc::ragged_rows, "row " + std::to_string(m) + " has " +
                                   std::to_string(rec.data[m].size()) +
                                   " samples, expected " + std::to_string(n));
  }
  if (!(rec.sample_rate_hz > 0.0))
    raise(errc::non_positive_rate, "sample_rate_hz must be > 0");
}

void validate_annotations(const AnnotationSet& set) {
  for (std::size_t i = 0; i < set.events.size(); ++i) {
    const auto& ev = set.events[i];
    if (ev.start_s < 0.0 || !(ev.start_s < ev.end_s))
      raise(errc::invalid_param,
            "annotation event " + std::to_string(i) +
                ": requires 0 <= start_s < end_s, got [" +
                std::to_string(ev.start_s) + ", " + std::to_string(ev.end_s) +
                ")");
  }
}

const std::vector<std::string>& default_channel_labels() {
  static const std::vector<std::string> labels = {
      "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",  "T3",  "C3", "Cz", "C4",
      "T4",  "T5",  "P3", "Pz", "P4", "T6", "O1",  "O2",  "Oz", "FT10", "FT9"};
  return labels;
}

}  // namespace swd
