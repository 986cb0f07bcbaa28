// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_ERRORS_HPP
#define CHEMEVAL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chemeval {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// SMILES text that cannot be parsed; carries the byte offset of the problem.
class InvalidSmiles : public Error {
public:
  InvalidSmiles(std::size_t position, const std::string &reason)
      : Error("invalid SMILES at position " + std::to_string(position) + ": " +
              reason),
        position_(position), reason_(reason) {}

  std::size_t position() const { return position_; }
  const std::string &reason() const { return reason_; }

private:
  std::size_t position_;
  std::string reason_;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

class ParameterMismatch : public Error {
public:
  using Error::Error;
};

/// A benchmark gold answer is itself broken; aborts the run, unlike a bad
/// model prediction which just scores zero.
class GoldInvalid : public Error {
public:
  using Error::Error;
};

class SchemaError : public Error {
public:
  SchemaError(std::size_t line, const std::string &field,
              const std::string &what)
      : Error("schema error at line " + std::to_string(line) + ", field '" +
              field + "': " + what),
        line_(line), field_(field) {}

  std::size_t line() const { return line_; }
  const std::string &field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

class DuplicateId : public Error {
public:
  using Error::Error;
};

class MissingBinding : public Error {
public:
  explicit MissingBinding(const std::string &name)
      : Error("missing template binding: " + name), name_(name) {}
  const std::string &name() const { return name_; }

private:
  std::string name_;
};

class NoTemplateForTask : public Error {
public:
  using Error::Error;
};

class EmptyBenchmark : public Error {
public:
  using Error::Error;
};

class JudgeUnavailable : public Error {
public:
  using Error::Error;
};

class Unavailable : public Error {
public:
  using Error::Error;
};

class AuthError : public Error {
public:
  using Error::Error;
};

class BadRequest : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace chemeval

#endif // CHEMEVAL_ERRORS_HPP
