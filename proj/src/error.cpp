#include "nbhd/error.hpp"

#include <sstream>

namespace nbhd {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kModelFormat:
      return "model-format";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kPrecondition:
      return "precondition";
    case ErrorCode::kTooLarge:
      return "too-large";
  }
  return "error";
}

namespace {

std::string describe(std::size_t offset, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::ostringstream os;
  os << "syntax error at byte " << offset << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << ", found " << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& found)
    : Error(ErrorCode::kParse, describe(offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace nbhd
