#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbhd {

enum class ErrorCode {
  kParse,
  kModelFormat,
  kInvalidArgument,
  kPrecondition,
  kTooLarge,
};

/// Machine-readable name used in CLI diagnostics, e.g. "parse-error".
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& found);

  /// Byte offset into the input where parsing failed.
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace nbhd
