#pragma once

#include <stdexcept>
#include <string>

namespace csg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (bad couplings spec, malformed
/// complex literal, out-of-range argument on a public entry point).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Violation of a documented call contract (e.g. lambda with b > a).
class ContractError : public Error {
public:
  using Error::Error;
};

/// lambda(n, 0) vanished at some stage: transition amplitudes and the
/// measure are undefined from that stage on.
class DegenerateDynamics : public Error {
public:
  explicit DegenerateDynamics(int stage)
      : Error("dynamics degenerate at stage " + std::to_string(stage) +
              ": lambda(n,0) = 0, amplitudes undefined"),
        stage_(stage) {}
  int stage() const noexcept { return stage_; }

private:
  int stage_;
};

/// Operation requested for a coupling family it is not defined on
/// (e.g. classical sampling with non-real-positive couplings).
class UnsupportedDynamics : public Error {
public:
  using Error::Error;
};

/// Enumeration request beyond the configured level cap.
class LevelCapExceeded : public Error {
public:
  LevelCapExceeded(int requested, int cap)
      : Error("level " + std::to_string(requested) +
              " exceeds the configured level cap " + std::to_string(cap) +
              " (raise the cap explicitly to proceed)"),
        requested_(requested), cap_(cap) {}
  int requested() const noexcept { return requested_; }
  int cap() const noexcept { return cap_; }

private:
  int requested_;
  int cap_;
};

/// A theorem-level invariant failed beyond numerical noise; indicates a
/// bug rather than bad input.
class InternalConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace csg
