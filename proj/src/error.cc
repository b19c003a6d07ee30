#include "cdoxai/error.h"

namespace cdoxai {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kUnsupportedSector: return "UnsupportedSector";
    case ErrorCode::kZeroLengthSegment: return "ZeroLengthSegment";
    case ErrorCode::kEmptySegments: return "EmptySegments";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIncompleteRow: return "IncompleteRow";
    case ErrorCode::kInvalidWeather: return "InvalidWeather";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kFeatureCountMismatch: return "FeatureCountMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kMissingCover: return "MissingCover";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kEmptyFolds: return "EmptyFolds";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kSingleClassData: return "SingleClassData";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kEmptyTraining: return "EmptyTraining";
    case ErrorCode::kEmptyRuleBase: return "EmptyRuleBase";
    case ErrorCode::kRuleSyntax: return "RuleSyntax";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     std::size_t line) {
  std::string out(ErrorCodeName(code));
  if (line > 0) out += "(" + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(Decorate(code, message, line)),
      code_(code),
      line_(line),
      detail_(message) {}

}  // namespace cdoxai
