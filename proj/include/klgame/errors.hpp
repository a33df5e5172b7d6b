#pragma once

#include <stdexcept>
#include <string>

namespace klgame {

enum class Errc {
  overlapping_domains,
  universe_mismatch,
  not_terminal,
  not_a_partition,
  empty_child,
  mass_mismatch,
  time_not_monotone,
  wager_exceeds_capital,
  size_mismatch,
  unknown_coordinate,
  invalid_program,
  inexact_division,
  domains_overlap,
  not_granular,
  param_violation,
  zone_overlaps_z,
  universe_too_small,
  gap_function_invalid,
  split_density_too_low,
  normalization_error,
  config_error,
  resource_limit,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, int event_time = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        event_time_(event_time) {}

  Errc code() const { return code_; }
  // First offending event time, when the failure is tied to one (-1 otherwise).
  int event_time() const { return event_time_; }

 private:
  Errc code_;
  int event_time_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what, int event_time = -1) {
  throw Error(code, what, event_time);
}

}  // namespace klgame
