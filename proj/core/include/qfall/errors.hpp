#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qfall {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, negative mass, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical guard tripped. `guard()` names which one so callers (the CLI in
/// particular) can report it without parsing the message.
class GuardError : public Error {
 public:
  GuardError(std::string guard, const std::string& what)
      : Error(guard + ": " + what), guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

/// Probability reached the outer band of the periodic grid.
class LeakageError : public GuardError {
 public:
  explicit LeakageError(const std::string& what) : GuardError("boundary-leakage", what) {}
};

/// A resampling step would lose or fold support (rebase_mass, Wigner transforms).
class AliasingError : public GuardError {
 public:
  explicit AliasingError(const std::string& what) : GuardError("aliasing", what) {}
};

/// A phase ramp is too fine for the lattice.
class UndersamplingError : public GuardError {
 public:
  explicit UndersamplingError(const std::string& what) : GuardError("undersampling", what) {}
};

/// A phase-space characteristic left the lattice.
class SupportError : public GuardError {
 public:
  explicit SupportError(const std::string& what) : GuardError("lattice-support", what) {}
};

/// Refused to allocate a dense grid-by-grid matrix.
class MemoryGuardError : public GuardError {
 public:
  explicit MemoryGuardError(const std::string& what) : GuardError("dense-matrix-size", what) {}
};

}  // namespace qfall
