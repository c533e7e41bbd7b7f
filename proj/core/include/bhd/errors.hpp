#pragma once

#include <stdexcept>
#include <string>

namespace bhd {

/// A parameter fell outside its physical range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Balancing cannot be reached inside the allowed parameter range.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record is too short for the requested spectral estimate.
class InsufficientDataError : public std::runtime_error {
 public:
  InsufficientDataError(const std::string& what, double required_duration_s)
      : std::runtime_error(what), required_duration_s_(required_duration_s) {}
  double required_duration_s() const noexcept { return required_duration_s_; }

 private:
  double required_duration_s_;
};

/// Stitched spans leave part of the requested range uncovered.
class StitchGapError : public std::runtime_error {
 public:
  StitchGapError(const std::string& what, double gap_low_hz, double gap_high_hz)
      : std::runtime_error(what), gap_low_hz_(gap_low_hz), gap_high_hz_(gap_high_hz) {}
  double gap_low_hz() const noexcept { return gap_low_hz_; }
  double gap_high_hz() const noexcept { return gap_high_hz_; }

 private:
  double gap_low_hz_;
  double gap_high_hz_;
};

/// Two traces that must share a frequency grid do not.
class BinMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The beam is not contained in the photodiode active area.
class ClippingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scattered power too large for the linearized beat model.
class LinearizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A budget source was not assigned to a coupling port.
class UnmappedSourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario parse or validation failure. `line` is 0 when the problem is not
/// tied to a specific line (missing section, command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : std::runtime_error(what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace bhd
