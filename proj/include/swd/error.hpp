#pragma once

#include <stdexcept>
#include <string>

namespace swd {

/// Failure categories shared across the library. The CLI maps these onto its
/// stable exit-code contract: input/validation problems exit 2, shape
/// incompatibilities exit 3, statistical degeneracies exit 4.
enum class errc {
  // input / validation
  parse_error,
  config_error,
  ragged_rows,
  empty_recording,
  non_positive_rate,
  unknown_channel,
  event_out_of_bounds,
  overlapping_events,
  invalid_param,
  // shape incompatibilities
  length_mismatch,
  window_longer_than_signal,
  no_compatible_template,
  // statistical degeneracies
  too_short,
  all_tied,
  degenerate_class,
  undefined_metric,
  single_class,
};

const char* errc_name(errc) noexcept;

/// Process exit code the CLI uses for this error category.
int exit_code_for(errc) noexcept;

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace swd
