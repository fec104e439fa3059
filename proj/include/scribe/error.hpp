#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scribe {

enum class ErrorCode {
  DuplicateType,
  UnknownParent,
  UnknownType,
  FieldNameCollision,
  BadFillerType,
  DuplicateEntity,
  DuplicateGeneric,
  UnknownEntity,
  UnknownField,
  TypeMismatch,
  CardinalityViolation,
  GenericEntityQueried,
  InvalidIdentifier,
  InvalidScore,
  TypeInUse,
  ParseError,
  SchemaVersionMismatch,
  UnknownParadigmClass,
  LemmaDoesNotMatchClassPattern,
  FeatureOutOfGrid,
  NoAlignedNoun,
  UnknownSense,
  UnknownLanguage,
  UnknownUserType,
  LanguageNotEnabled,
  UnknownFact,
  EntityNotYetDescribed,
  EmptySelection,
  NoTemplateForField,
  CannedTextMissingLanguage,
  NoFactForField,
  PermissionDenied,
  InvalidEdit,
  ValidationFailed,
};

std::string_view to_string(ErrorCode code);

// All engine failures surface as this exception; `code()` is the stable
// discriminator, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string location;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace scribe
