#include "scribe/error.hpp"

namespace scribe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateType: return "DuplicateType";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::FieldNameCollision: return "FieldNameCollision";
    case ErrorCode::BadFillerType: return "BadFillerType";
    case ErrorCode::DuplicateEntity: return "DuplicateEntity";
    case ErrorCode::DuplicateGeneric: return "DuplicateGeneric";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::CardinalityViolation: return "CardinalityViolation";
    case ErrorCode::GenericEntityQueried: return "GenericEntityQueried";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::InvalidScore: return "InvalidScore";
    case ErrorCode::TypeInUse: return "TypeInUse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::UnknownParadigmClass: return "UnknownParadigmClass";
    case ErrorCode::LemmaDoesNotMatchClassPattern: return "LemmaDoesNotMatchClassPattern";
    case ErrorCode::FeatureOutOfGrid: return "FeatureOutOfGrid";
    case ErrorCode::NoAlignedNoun: return "NoAlignedNoun";
    case ErrorCode::UnknownSense: return "UnknownSense";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::UnknownUserType: return "UnknownUserType";
    case ErrorCode::LanguageNotEnabled: return "LanguageNotEnabled";
    case ErrorCode::UnknownFact: return "UnknownFact";
    case ErrorCode::EntityNotYetDescribed: return "EntityNotYetDescribed";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::NoTemplateForField: return "NoTemplateForField";
    case ErrorCode::CannedTextMissingLanguage: return "CannedTextMissingLanguage";
    case ErrorCode::NoFactForField: return "NoFactForField";
    case ErrorCode::PermissionDenied: return "PermissionDenied";
    case ErrorCode::InvalidEdit: return "InvalidEdit";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
  }
  return "Unknown";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

}  // namespace scribe
