#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rrs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values: negative budgets, alpha <= 1, zero map entries.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class InterpreterError : public Error {
 public:
  InterpreterError(std::size_t sample, const std::string& what)
      : Error("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}
  std::size_t sample() const { return sample_; }

 private:
  std::size_t sample_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class MissingFile : public FormatError {
 public:
  explicit MissingFile(const std::string& path) : FormatError("cannot open " + path) {}
};

class BadMagic : public FormatError {
 public:
  using FormatError::FormatError;
};

class UnsupportedVersion : public FormatError {
 public:
  explicit UnsupportedVersion(std::uint16_t v)
      : FormatError("unsupported RRSM version " + std::to_string(v)), version_(v) {}
  std::uint16_t version() const { return version_; }

 private:
  std::uint16_t version_;
};

class TruncatedFile : public FormatError {
 public:
  explicit TruncatedFile(std::uint64_t offset)
      : FormatError("truncated RRSM file at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

class DimMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

class InvalidHeader : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace rrs
