#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribe/kb.hpp"
#include "scribe/planner.hpp"
#include "scribe/usermodel.hpp"

namespace scribe {

// An entity, or a literal attribute value rendered through valueText.
struct ReferTarget {
  std::string entityId;
  std::optional<FactValue> literal;

  bool isEntity() const { return !entityId.empty(); }
  bool operator==(const ReferTarget&) const = default;
};

enum class NpMode { Unset, Name, Demonstrative, Pronoun, Definite, Indefinite };

std::string_view to_string(NpMode m);

enum class ClauseKind {
  Predicate,   // verb clause from a template
  Copular,     // "<subject> is a <type noun>"
  Absorbed,    // type-intro carried by the first demonstrative NP; renders empty
  Canned,      // verbatim text
  Comparison,  // comparison template wrapping one predicate clause
};

std::string_view to_string(ClauseKind k);

struct ClauseSpec {
  ClauseKind kind = ClauseKind::Predicate;
  std::string sourceNode;
  std::string field;
  Relation relation = Relation::Elaboration;

  std::string verb;
  Voice voice = Voice::Active;
  Tense tense = Tense::Present;
  std::map<Role, ReferTarget> roles;
  std::string preposition;            // sense for the oblique role
  std::vector<std::string> adjuncts;  // may contain "{value}"
  std::optional<FactValue> value;     // substituted into adjuncts

  std::string complementType;  // copular: type whose noun is the complement
  std::string subjectType;     // when set, the subject NP uses this type's noun
  std::string cannedText;
  std::string previousEntity;     // comparison
  std::vector<ClauseSpec> inner;  // comparison: the restated clause

  // Advisory only; agreement with the subject always wins.
  std::string requestedPerson;
  std::string requestedNumber;

  const ReferTarget* subject() const {
    auto it = roles.find(Role::Subject);
    return it == roles.end() ? nullptr : &it->second;
  }
};

struct SentenceSpec {
  std::vector<ClauseSpec> clauses;
  std::vector<bool> elided;  // per clause: subject omitted
  std::map<std::string, NpMode> npModes;  // entity id -> mode
  Relation relation = Relation::Elaboration;
};

struct MicroplanConfig {
  int maxClausesPerSentence = 2;
};

struct Agreement {
  std::string gender;
  std::string number = "sg";
};

// Gender/number an entity is referred to with: a proper name's own gender
// when set, else the gender of its type noun.
Agreement referentAgreement(const KnowledgeBase& kb, const Entity& e, std::string_view language,
                            std::string_view reg);

std::string registerOf(const KnowledgeBase& kb, const SessionState& session);

// Builds a clause for `fact` with `subjectEntity` standing in for the owner.
ClauseSpec clauseFromTemplate(const ClauseTemplate& tmpl, const Fact& fact,
                              const std::string& subjectEntity);

// Round-robin over register-eligible templates; advances the session's
// variation counter for the field.
ClauseSpec lexicalize(const PlanNode& node, const std::string& entityId, const std::string& language,
                      SessionState& session, const KnowledgeBase& kb);

std::vector<SentenceSpec> aggregate(const std::vector<ClauseSpec>& clauses, int maxClausesPerSentence);

void chooseReferringExpressions(std::vector<SentenceSpec>& sentences, const std::string& focalEntity,
                                SessionState& session, const KnowledgeBase& kb,
                                const std::string& language);

ClauseSpec comparisonClause(const ComparisonCandidate& candidate, const std::string& language,
                            SessionState& session, const KnowledgeBase& kb, ClauseSpec restated);

ClauseSpec renderCannedNode(const PlanNode& node, const std::string& language, const KnowledgeBase& kb);

// The whole stage: nodes -> clauses -> sentences with referring expressions.
std::vector<SentenceSpec> microplan(const DocumentPlan& plan, const std::string& language,
                                    SessionState& session, const KnowledgeBase& kb,
                                    const MicroplanConfig& config = {});

}  // namespace scribe
