#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribe/kb.hpp"
#include "scribe/selection.hpp"
#include "scribe/usermodel.hpp"

namespace scribe {

enum class Relation { First, Elaboration, Contrast, ComparisonRestate };

std::string_view to_string(Relation r);

enum class NodeKind { TypeIntro, Fact, Canned, Comparison };

std::string_view to_string(NodeKind k);

struct PlanNode {
  NodeKind kind = NodeKind::Fact;
  std::string payload;  // fact id, canned paragraph id or type-intro id
  std::string field;
  Relation relation = Relation::Elaboration;
  std::optional<ComparisonCandidate> comparison;  // NodeKind::Comparison only

  bool operator==(const PlanNode&) const = default;
};

struct DocumentPlan {
  std::string entityId;
  std::vector<PlanNode> nodes;

  bool operator==(const DocumentPlan&) const = default;
};

// The type's schema, else the nearest ancestor's, else
// [type-intro, fieldsOf order..., stories].
Schema schemaFor(const KnowledgeBase& kb, std::string_view typeName);

// Throws EmptySelection for an exhausted selection.
DocumentPlan planDocument(const KnowledgeBase& kb, const SelectionResult& selection,
                          const SessionState& session);

}  // namespace scribe
