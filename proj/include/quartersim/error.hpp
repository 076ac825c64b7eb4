#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quartersim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `path` locates the offending element (JSON pointer or file:line).
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// One or more invariants failed; every failed rule is kept.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> failures)
      : Error(join(failures)), failures_(std::move(failures)) {}
  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "validation failed";
    for (const auto& s : items) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> failures_;
};

class ImportError : public Error { using Error::Error; };
class IntegrityError : public Error { using Error::Error; };
class SingularityError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class SizingError : public Error { using Error::Error; };
class ConfigurationError : public Error { using Error::Error; };
class ProfileError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };
class CorruptionError : public Error { using Error::Error; };
class VersionError : public Error { using Error::Error; };
class AssemblyError : public Error { using Error::Error; };
class TopologyError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };

/// Newton-Raphson did not converge; carries the max mismatch of each iteration.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace quartersim
