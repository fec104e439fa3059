#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "scribe/kb.hpp"

namespace scribe {

// KB bundle: one UTF-8 JSON document, version tag "exhibit-scribe/1".
nlohmann::json bundleToJson(const KnowledgeBase& kb);
KnowledgeBase bundleFromJson(const nlohmann::json& doc);

// ParseError carries "line L, column C" for malformed JSON.
KnowledgeBase parseBundle(std::string_view text);
KnowledgeBase loadBundle(const std::filesystem::path& path);
void saveBundle(const KnowledgeBase& kb, const std::filesystem::path& path);
std::string dumpBundle(const KnowledgeBase& kb);

// Record codecs, reused by the authoring API. All throw ParseError on shape
// errors.
FieldDef fieldFromJson(const nlohmann::json& j);
nlohmann::json fieldToJson(const FieldDef& f);
Entity entityFromJson(const nlohmann::json& j);
nlohmann::json entityToJson(const Entity& e);
FactValue valueFromJson(const nlohmann::json& j);
nlohmann::json valueToJson(const FactValue& v);
FactScores scoresFromJson(const nlohmann::json& j);
nlohmann::json scoresToJson(const FactScores& s);
ScoreMap scoreMapFromJson(const nlohmann::json& j);
nlohmann::json scoreMapToJson(const ScoreMap& m);
Fact factFromJson(const nlohmann::json& j);
nlohmann::json factToJson(const Fact& f);
CannedParagraph cannedFromJson(const nlohmann::json& j);
nlohmann::json cannedToJson(const CannedParagraph& c);
Schema schemaFromJson(const nlohmann::json& j);
nlohmann::json schemaToJson(const Schema& s);
UserTypeDef userTypeFromJson(const nlohmann::json& j);
nlohmann::json userTypeToJson(const UserTypeDef& u);
ClauseTemplate templateFromJson(const nlohmann::json& j);
nlohmann::json templateToJson(const ClauseTemplate& t);
NounEntry nounFromJson(const nlohmann::json& j);
nlohmann::json nounToJson(const NounEntry& n);
VerbEntry verbFromJson(const nlohmann::json& j);
nlohmann::json verbToJson(const VerbEntry& v);
AdjectiveEntry adjectiveFromJson(const nlohmann::json& j);
nlohmann::json adjectiveToJson(const AdjectiveEntry& a);
nlohmann::json diagnosticsToJson(const Diagnostics& diags);

Date parseDate(std::string_view text);
std::string formatDate(const Date& d);

}  // namespace scribe
