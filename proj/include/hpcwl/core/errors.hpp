#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hpcwl {

// Input errors map to CLI exit code 2, analysis errors to exit code 1.
enum class ErrorKind { input, analysis };

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, ErrorKind kind)
      : std::runtime_error(message), code_(std::move(code)), kind_(kind) {}

  const std::string& code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string code_;
  ErrorKind kind_;
};

class IOError : public Error {
 public:
  explicit IOError(const std::string& path, const std::string& why = "cannot open");
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Row numbers are 1-based data-record indices (the CSV header is not a row).
class SchemaError : public Error {
 public:
  SchemaError(std::size_t row, std::string field, const std::string& detail);
  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t row_;
  std::string field_;
};

class TimestampOrderError : public Error {
 public:
  explicit TimestampOrderError(std::size_t row);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class OverlappingFactorWindows : public Error {
 public:
  explicit OverlappingFactorWindows(const std::string& resource);
};

class MissingGeometry : public Error {
 public:
  explicit MissingGeometry(const std::string& resource);
};

class NoFactorForDate : public Error {
 public:
  NoFactorForDate(const std::string& resource, const std::string& date);
};

class UnknownResource : public Error {
 public:
  explicit UnknownResource(const std::string& resource);
};

class InvalidMemInfo : public Error {
 public:
  explicit InvalidMemInfo(const std::string& detail);
};

class InvalidPattern : public Error {
 public:
  InvalidPattern(std::size_t line, const std::string& detail);
};

class EmptyGroup : public Error {
 public:
  explicit EmptyGroup(const std::string& group);
};

class EmptyProfile : public Error {
 public:
  EmptyProfile();
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& detail);
};

class SeparationDetected : public Error {
 public:
  SeparationDetected();
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(int iterations);
};

class UnknownAnalysis : public Error {
 public:
  explicit UnknownAnalysis(const std::string& name);
};

// Wraps an error raised inside a report analysis, keeping the original code.
class AnalysisError : public Error {
 public:
  AnalysisError(const std::string& analysis, const Error& inner);
  AnalysisError(const std::string& analysis, const std::string& message);
  const std::string& analysis() const noexcept { return analysis_; }

 private:
  std::string analysis_;
};

}  // namespace hpcwl
