#pragma once

#include <stdexcept>
#include <string>

namespace gkat {

/// Malformed user input: syntax errors, ill-formed programs, undeclared names.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant (disjointedness, missing table entry, ...).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Failure inside a Boolean backend; carries the backend name.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string backend, const std::string& what)
      : std::runtime_error(backend + ": " + what), backend_(std::move(backend)) {}
  const std::string& backend() const { return backend_; }

 private:
  std::string backend_;
};

}  // namespace gkat
