#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace powercal {

enum class Errc {
  invalid_argument,
  counter_regression,
  parse_error,
  non_monotonic_timestamp,
  insufficient_samples,
  empty_grid,
  rate_unachievable,
  host_failure,
  domain_violation,
  insufficient_data,
  ill_conditioned,
  degenerate_power,
  non_positive_power,
  uncalibrated_operating_point,
  load_out_of_domain,
  uncalibrated_block_size,
  uncalibrated_packet_size,
  rate_out_of_domain,
  missing_artifact,
  schema_version,
  phase_failed,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::counter_regression: return "CounterRegression";
    case Errc::parse_error: return "ParseError";
    case Errc::non_monotonic_timestamp: return "NonMonotonicTimestamp";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::rate_unachievable: return "RateUnachievable";
    case Errc::host_failure: return "HostFailure";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::ill_conditioned: return "IllConditioned";
    case Errc::degenerate_power: return "DegeneratePower";
    case Errc::non_positive_power: return "NonPositivePower";
    case Errc::uncalibrated_operating_point: return "UncalibratedOperatingPoint";
    case Errc::load_out_of_domain: return "LoadOutOfDomain";
    case Errc::uncalibrated_block_size: return "UncalibratedBlockSize";
    case Errc::uncalibrated_packet_size: return "UncalibratedPacketSize";
    case Errc::rate_out_of_domain: return "RateOutOfDomain";
    case Errc::missing_artifact: return "MissingArtifact";
    case Errc::schema_version: return "SchemaVersion";
    case Errc::phase_failed: return "PhaseFailed";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as an Error carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(Errc::parse_error, "line " + std::to_string(line) + ": " + reason), line_(line) {}
  ParseError(Errc code, std::size_t line, const std::string& reason)
      : Error(code, "line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by estimate_total; wraps the first failing phase.
class PhaseError : public Error {
 public:
  PhaseError(std::size_t index, std::string phase_name, const Error& cause)
      : Error(Errc::phase_failed,
              "phase " + std::to_string(index) + " (" + phase_name + "): " + cause.what()),
        index_(index),
        phase_name_(std::move(phase_name)),
        cause_(cause.code()) {}

  std::size_t index() const noexcept { return index_; }
  const std::string& phase_name() const noexcept { return phase_name_; }
  Errc cause() const noexcept { return cause_; }

 private:
  std::size_t index_;
  std::string phase_name_;
  Errc cause_;
};

}  // namespace powercal
