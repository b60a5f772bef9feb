#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ris {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths or array shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An index lies outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data is well-formed but violates a value constraint (e.g. NaN).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition fails (e.g. empty user set).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured search-space guard.
class SearchLimitError : public Error {
 public:
  SearchLimitError(const std::string& what, double requested, double limit)
      : Error(what), requested_(requested), limit_(limit) {}
  double requested() const { return requested_; }
  double limit() const { return limit_; }

 private:
  double requested_;
  double limit_;
};

/// A file could not be parsed; carries the failing position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Training produced a non-finite loss.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// A pipeline stage failed; wraps the underlying error with the stage name.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// An I/O operation failed.
class IoError : public Error {
 public:
  using Error::Error;
};

// Warnings go to stderr unless silenced (tests silence them); each distinct
// message is printed once per process.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace ris
