#ifndef CDOXAI_ERROR_H_
#define CDOXAI_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cdoxai {

enum class ErrorCode {
  // ingest
  kMissingColumn,
  kMalformedRow,
  kEmptyFile,
  kTooFewPoints,
  kUnsupportedSector,
  // features
  kZeroLengthSegment,
  kEmptySegments,
  kOutOfRange,
  kIncompleteRow,
  kInvalidWeather,
  // forest / cv
  kUnknownLabel,
  kClassTooSmall,
  kDegenerateData,
  kNonFiniteGradient,
  kFeatureCountMismatch,
  kLengthMismatch,
  kEmptyInput,
  kInvalidModel,
  // shapley
  kMissingCover,
  kSchemaMismatch,
  kEmptyFolds,
  kUnknownFeature,
  kEmptySample,
  kSingleClassData,
  // fexai
  kNonFiniteValue,
  kEmptyTraining,
  kEmptyRuleBase,
  kRuleSyntax,
  // synth
  kInfeasibleSpec,
  // plumbing
  kIo,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All data-level failures surface as this exception. `line()` is the 1-based
// input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }
  // The message without the code and line decoration.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::string detail_;
};

}  // namespace cdoxai

#endif  // CDOXAI_ERROR_H_
