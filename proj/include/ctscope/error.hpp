#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctscope {

// Process exit codes used by the CLI.
enum class ExitCode : int { kOk = 0, kConfig = 2, kData = 3, kDependency = 4 };

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid configuration value or argument.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

/// Bad input data: malformed records, coverage gaps, shape mismatches.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

class IoError : public DataError {
 public:
  explicit IoError(const std::string& what) : DataError(what) {}
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ShapeError : public DataError {
 public:
  explicit ShapeError(const std::string& what) : DataError(what) {}
};

/// A provider of precomputed values does not cover every requested id.
class CoverageError : public DataError {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : DataError(what), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

/// A pipeline stage ran before the artifacts it depends on exist.
class DependencyError : public Error {
 public:
  DependencyError(const std::string& stage, const std::string& what)
      : Error(ExitCode::kDependency, "stage '" + stage + "': " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace ctscope
