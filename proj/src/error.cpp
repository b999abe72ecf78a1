#include "swd/error.hpp"

namespace swd {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::parse_error: return "parse_error";
    case errc::config_error: return "config_error";
    case errc::ragged_rows: return "ragged_rows";
    case errc::empty_recording: return "empty_recording";
    case errc::non_positive_rate: return "non_positive_rate";
    case errc::unknown_channel: return "unknown_channel";
    case errc::event_out_of_bounds: return "event_out_of_bounds";
    case errc::overlapping_events: return "overlapping_events";
    case errc::invalid_param: return "invalid_param";
    case errc::length_mismatch: return "length_mismatch";
    case errc::window_longer_than_signal: return "window_longer_than_signal";
    case errc::no_compatible_template: return "no_compatible_template";
    case errc::too_short: return "too_short";
    case errc::all_tied: return "all_tied";
    case errc::degenerate_class: return "degenerate_class";
    case errc::undefined_metric: return "undefined_metric";
    case errc::single_class: return "single_class";
  }
  return "unknown";
}

int exit_code_for(errc code) noexcept {
  switch (code) {
    case errc::parse_error:
    case errc::config_error:
    case errc::ragged_rows:
    case errc::empty_recording:
    case errc::non_positive_rate:
    case errc::unknown_channel:
    case errc::event_out_of_bounds:
    case errc::overlapping_events:
    case errc::invalid_param:
      return 2;
    case errc::length_mismatch:
    case errc::window_longer_than_signal:
    case errc::no_compatible_template:
      return 3;
    case errc::too_short:
    case errc::all_tied:
    case errc::degenerate_class:
    case errc::undefined_metric:
    case errc::single_class:
      return 4;
  }
  return 1;
}

}  // namespace swd
