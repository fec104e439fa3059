#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "scribe/error.hpp"
#include "scribe/lexicon.hpp"

namespace scribe {

inline constexpr std::string_view kRootType = "entity";
inline constexpr std::string_view kTypeIntro = "type-intro";
inline constexpr std::string_view kStoriesMarker = "stories";
inline constexpr std::string_view kBundleVersion = "exhibit-scribe/1";

// lowercase ASCII words joined by single hyphens
bool isIdentifier(std::string_view s);

enum class FieldKind { Relation, Attribute };
enum class Datatype { None, LocalizedString, Date, Number };

std::string_view to_string(FieldKind kind);
std::string_view to_string(Datatype type);

struct FieldDef {
  std::string name;
  FieldKind kind = FieldKind::Relation;
  std::string fillerType;  // relation only
  Datatype datatype = Datatype::None;  // attribute only
  bool setValued = false;
  bool cannedText = false;  // string attributes only

  bool operator==(const FieldDef&) const = default;
};

struct EntityTypeDef {
  std::string name;
  std::optional<std::string> parent;  // empty only for the root
  std::vector<FieldDef> fields;       // introduced here, in order

  bool operator==(const EntityTypeDef&) const = default;
};

struct ProperName {
  std::string text;
  std::string gender;  // overrides the type noun's gender when set

  bool operator==(const ProperName&) const = default;
};

struct Entity {
  std::string id;
  std::string typeName;
  bool generic = false;
  std::map<std::string, ProperName> names;  // language -> name
  std::string modifier;  // adjective sense used in full noun phrases

  bool operator==(const Entity&) const = default;
};

struct Date {
  int year = 0;  // negative = BC
  int month = 0;
  int day = 0;

  bool operator==(const Date&) const = default;
  auto operator<=>(const Date&) const = default;
};

struct EntityRef {
  std::string id;

  bool operator==(const EntityRef&) const = default;
};

using FactValue = std::variant<EntityRef, Date, double, LocalizedText>;

struct FactScores {
  double interest = 0.5;
  double importance = 0.5;
  double baseAssimilation = 0.0;

  bool operator==(const FactScores&) const = default;
};

using ScoreMap = std::map<std::string, FactScores>;  // user type -> scores

struct Fact {
  std::string id;
  std::string owner;
  std::string field;
  FactValue value;
  ScoreMap scores;

  bool operator==(const Fact&) const = default;
};

enum class AttachKind { Entity, Type };

struct CannedParagraph {
  std::string id;
  AttachKind attachKind = AttachKind::Entity;
  std::string attachedTo;
  LocalizedText text;
  ScoreMap scores;

  bool operator==(const CannedParagraph&) const = default;
};

struct Schema {
  std::string entityType;
  std::vector<std::string> fields;  // may contain "type-intro" and "stories"

  bool operator==(const Schema&) const = default;
};

struct UserTypeDef {
  std::string name;
  std::string registerTag;
  int defaultMaxFacts = 5;
  FactScores defaultScores;

  bool operator==(const UserTypeDef&) const = default;
};

enum class Voice { Active, Passive };
enum class Tense { Present, Past };

std::string_view to_string(Voice v);
std::string_view to_string(Tense t);

// Clause role a fact participant is expressed in. Oblique phrases carry a
// preposition sense resolved through the pack.
enum class Role { None, Subject, Object, Agent, Oblique };

std::string_view to_string(Role r);

struct ClauseTemplate {
  std::string field;
  std::string language;
  std::string verb;  // verb sense
  Voice voice = Voice::Active;
  Tense tense = Tense::Present;
  Role ownerRole = Role::Subject;
  Role fillerRole = Role::None;
  std::string preposition;  // for Role::Oblique
  std::vector<std::string> registers;
  // Fixed trailing tokens; "{value}" is replaced by the attribute value.
  std::vector<std::string> adjuncts;

  bool operator==(const ClauseTemplate&) const = default;
};

// Immutable-by-convention snapshot: mutators edit this object, and callers
// that need snapshot semantics copy first.
class KnowledgeBase {
 public:
  KnowledgeBase();

  bool operator==(const KnowledgeBase& other) const;

  // --- types and fields
  void defineType(const std::string& name, const std::string& parent);
  void defineField(const std::string& typeName, const FieldDef& field);
  void modifyField(const std::string& typeName, const FieldDef& field);
  void renameType(const std::string& from, const std::string& to);
  void renameField(const std::string& typeName, const std::string& from,
                   const std::string& to);
  void removeType(const std::string& name);

  const std::vector<EntityTypeDef>& types() const { return types_; }
  const EntityTypeDef* findType(std::string_view name) const;
  const EntityTypeDef& type(std::string_view name) const;  // UnknownType

  // Root-down ancestor fields first, then the type's own.
  std::vector<FieldDef> fieldsOf(std::string_view typeName) const;
  std::optional<FieldDef> findField(std::string_view typeName,
                                    std::string_view fieldName) const;
  // The type that introduces `fieldName`, searching the whole hierarchy.
  const EntityTypeDef* fieldOwner(std::string_view fieldName) const;
  bool isSubtype(std::string_view a, std::string_view b) const;
  // [typeName, parent, ..., "entity"]
  std::vector<std::string> ancestry(std::string_view typeName) const;
  std::vector<std::string> subtypes(std::string_view typeName) const;

  // --- entities
  void addEntity(const Entity& entity);
  void removeEntity(const std::string& id);
  void setEntityName(const std::string& id, const std::string& language,
                     const ProperName& name);
  const std::vector<Entity>& entities() const { return entities_; }
  const Entity* findEntity(std::string_view id) const;
  const Entity& entity(std::string_view id) const;  // UnknownEntity
  const Entity* genericOf(std::string_view typeName) const;

  // --- facts
  std::string assertFact(const std::string& owner, const std::string& field,
                         const FactValue& value, const ScoreMap& scores = {},
                         const std::string& id = {});
  void retractFact(const std::string& id);
  void setScores(const std::string& factId, const std::string& userType,
                 const FactScores& scores);
  const std::vector<Fact>& facts() const { return facts_; }
  const Fact* findFact(std::string_view id) const;
  const Fact& fact(std::string_view id) const;  // UnknownFact
  std::vector<const Fact*> factsOf(std::string_view owner) const;
  // Own facts, then generic defaults nearest type first, minus any field the
  // entity (or a nearer generic) already fills.
  std::vector<Fact> effectiveFacts(std::string_view entityId) const;

  // --- canned paragraphs ("stories")
  void addCanned(const CannedParagraph& paragraph);
  void removeCanned(const std::string& id);
  void setCannedScores(const std::string& id, const std::string& userType,
                       const FactScores& scores);
  const std::vector<CannedParagraph>& canned() const { return canned_; }
  const CannedParagraph* findCanned(std::string_view id) const;
  // Attached to the entity, then to its types nearest first.
  std::vector<const CannedParagraph*> cannedFor(std::string_view entityId) const;
  std::vector<std::string> storiesOf(std::string_view typeName) const;

  // --- schemas, user types, templates, lexicon, languages
  void setSchema(const Schema& schema);
  void removeSchema(const std::string& typeName);
  const std::vector<Schema>& schemas() const { return schemas_; }
  const Schema* findSchema(std::string_view typeName) const;

  void setUserType(const UserTypeDef& def);
  const std::vector<UserTypeDef>& userTypes() const { return userTypes_; }
  const UserTypeDef* findUserType(std::string_view name) const;
  const UserTypeDef& userType(std::string_view name) const;  // UnknownUserType
  // Scores of `fact` for the user type, falling back to its defaults.
  FactScores scoresFor(const ScoreMap& scores, std::string_view userType) const;

  void addTemplate(const ClauseTemplate& tmpl);
  void setTemplates(const std::string& field, const std::string& language,
                    std::vector<ClauseTemplate> templates);
  const std::vector<ClauseTemplate>& templates() const { return templates_; }
  std::vector<const ClauseTemplate*> templatesFor(std::string_view field,
                                                  std::string_view language) const;

  Lexicon& lexicon() { return lexicon_; }
  const Lexicon& lexicon() const { return lexicon_; }

  void setLanguages(std::vector<std::string> languages) { languages_ = std::move(languages); }
  const std::vector<std::string>& languages() const { return languages_; }
  bool languageEnabled(std::string_view code) const;

  // Loading path: inserts records without invariant checks; run validate().
  void loadType(EntityTypeDef def);
  void loadEntity(Entity entity);
  void loadFact(Fact fact);
  void loadCanned(CannedParagraph paragraph);

 private:
  void reindex();
  void requireType(std::string_view name) const;
  std::string uniqueFactId(const std::string& owner, const std::string& field) const;
  void checkValue(const FieldDef& field, const FactValue& value) const;

  std::vector<EntityTypeDef> types_;
  std::vector<Entity> entities_;
  std::vector<Fact> facts_;
  std::vector<CannedParagraph> canned_;
  std::vector<Schema> schemas_;
  std::vector<UserTypeDef> userTypes_;
  std::vector<ClauseTemplate> templates_;
  Lexicon lexicon_;
  std::vector<std::string> languages_;

  std::unordered_map<std::string, std::size_t> typeIndex_;
  std::unordered_map<std::string, std::size_t> entityIndex_;
  std::unordered_map<std::string, std::size_t> factIndex_;
};

Diagnostics validate(const KnowledgeBase& kb);

// Renders a fact value for display or template substitution.
std::string valueText(const FactValue& value, std::string_view language,
                      const KnowledgeBase& kb, std::string_view eraSuffix = "BC");

// Id of the implicit "entity is-a type" fact for an entity.
std::string typeIntroId(std::string_view entityId);
bool isTypeIntroId(std::string_view id);

}  // namespace scribe
