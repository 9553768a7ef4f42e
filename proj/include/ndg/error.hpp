#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ndg {

enum class ErrorCode {
  kInvalidDiagram,
  kInvalidStipulation,
  kUnknownNeuron,
  kPolarityMismatch,
  kNoPath,
  kPathLimit,
  kTieDisagreement,
  kParse,
  kCorpus,
  kInfeasible,
  kUnverifiedCase,
  kConfig,
  kAuth,
  kTransport,
  kMalformedResponse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct SourcePosition {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourcePosition pos, const std::string& message)
      : Error(ErrorCode::kParse, std::to_string(pos.line) + ":" +
                                     std::to_string(pos.column) + ": " +
                                     message),
        pos_(pos),
        detail_(message) {}

  SourcePosition position() const noexcept { return pos_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourcePosition pos_;
  std::string detail_;
};

}  // namespace ndg
