#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace domscore {

enum class ErrorKind {
  schema,
  validation,
  empty_reference,
  domain,
  weight,
  group_size,
};

std::string_view to_string(ErrorKind kind);

/// Base for every error raised by the scoring engine. `path` is a JSON
/// pointer into the offending document when one applies, otherwise empty.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string path, const std::string& message)
      : std::runtime_error(message), kind_(kind), path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorKind kind_;
  std::string path_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(ErrorKind::schema, std::move(path), message) {}
};

class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(ErrorKind::validation, std::move(path), message) {}
};

/// The reference page has no visible elements and cannot be scored.
class EmptyReferenceError : public Error {
 public:
  explicit EmptyReferenceError(const std::string& message = "reference page has no visible elements")
      : Error(ErrorKind::empty_reference, "", message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorKind::domain, "", message) {}
};

class WeightError : public Error {
 public:
  explicit WeightError(const std::string& message) : Error(ErrorKind::weight, "", message) {}
};

class GroupSizeError : public Error {
 public:
  explicit GroupSizeError(const std::string& message) : Error(ErrorKind::group_size, "", message) {}
};

}  // namespace domscore
