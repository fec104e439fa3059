#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scribe/kb.hpp"
#include "scribe/usermodel.hpp"

namespace scribe {

struct SelectionConfig {
  double theta = 0.95;
  // Relation fields eligible for comparisons; empty means all of them.
  std::vector<std::string> comparisonFields;
  double decayLambda = 0.0;
};

enum class CandidateKind { TypeIntro, Fact, Canned };

// One selectable item: an effective fact, the type-intro pseudo-fact or an
// attached canned paragraph.
struct Candidate {
  std::string id;
  CandidateKind kind = CandidateKind::Fact;
  std::string field;  // "type-intro", "stories" or the fact's field
  FactScores scores;
  double assimilation = 0.0;
  double relevance = 0.0;
  std::optional<Fact> fact;  // for CandidateKind::Fact
};

struct ComparisonCandidate {
  std::string currentEntity;
  std::string previousEntity;
  std::string sharedField;
  FactValue sharedValue;
  std::string factId;  // the chosen fact of the current entity it restates

  bool operator==(const ComparisonCandidate&) const = default;
};

struct SelectionResult {
  std::string entityId;
  std::vector<std::string> chosenFacts;  // ranked
  std::optional<ComparisonCandidate> comparison;
  bool exhausted = false;
};

// r = ((I + M) / 2)(1 - A), clamped to [0,1].
double relevance(const FactScores& scores, double assimilation);
double relevance(const KnowledgeBase& kb, const SessionState& session, std::string_view id);

std::vector<Candidate> candidates(const KnowledgeBase& kb, const SessionState& session,
                                  const std::string& entityId);

// Index of a candidate's field in the entity's effective schema; fields the
// schema does not list sort after every listed one.
std::size_t schemaPriority(const Schema& schema, const Candidate& c);

SelectionResult selectFacts(const KnowledgeBase& kb, const SessionState& session,
                            const std::string& entityId, const SelectionConfig& config = {});
// Throws EntityNotYetDescribed.
SelectionResult sayMore(const KnowledgeBase& kb, const SessionState& session,
                        const std::string& entityId, const SelectionConfig& config = {});

std::optional<ComparisonCandidate> findComparison(const KnowledgeBase& kb, const SessionState& session,
                                                  const std::string& entityId,
                                                  const std::vector<std::string>& chosenFacts,
                                                  const SelectionConfig& config = {});

}  // namespace scribe
