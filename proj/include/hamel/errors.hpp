#pragma once

#include <stdexcept>
#include <string>

namespace hamel {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad arguments: dimension mismatches, unclosed paths, invalid parameters.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error("input: " + what) {}
};

/// Rotation angle too close to pi; principal-branch log is ambiguous.
class BranchAmbiguityError : public Error {
public:
  explicit BranchAmbiguityError(const std::string& what)
      : Error("branch ambiguity: " + what) {}
};

/// A(q) not invertible where a quasi-velocity map requires it.
class SingularMapError : public Error {
public:
  explicit SingularMapError(const std::string& what)
      : Error("singular map: " + what) {}
};

/// Inertia block not symmetric positive definite (bad model data).
class InertiaError : public Error {
public:
  explicit InertiaError(const std::string& what) : Error("inertia: " + what) {}
};

/// Quasi-velocity map lacks the block structure an operation requires.
class StructureError : public Error {
public:
  explicit StructureError(const std::string& what)
      : Error("structure: " + what) {}
};

/// Operation not available for the given group tag.
class UnsupportedError : public Error {
public:
  explicit UnsupportedError(const std::string& what)
      : Error("unsupported: " + what) {}
};

/// Config document violates the schema; `field` is the offending path.
class ConfigError : public Error {
public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("config: " + field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// State became non-finite during integration; `last_good_time` is the
/// last sample that was still finite.
class DivergenceError : public Error {
public:
  DivergenceError(double last_good_time, const std::string& what)
      : Error("divergence: " + what + " (last good t=" +
              std::to_string(last_good_time) + ")"),
        last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

private:
  double last_good_time_;
};

}  // namespace hamel
