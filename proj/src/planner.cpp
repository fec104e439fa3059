#include "scribe/planner.hpp"

#include <algorithm>
#include <map>

namespace scribe {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::First: return "first";
    case Relation::Elaboration: return "elaboration";
    case Relation::Contrast: return "contrast";
    case Relation::ComparisonRestate: return "comparison-restate";
  }
  return "elaboration";
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::TypeIntro: return "type-intro";
    case NodeKind::Fact: return "fact";
    case NodeKind::Canned: return "canned";
    case NodeKind::Comparison: return "comparison";
  }
  return "fact";
}

Schema schemaFor(const KnowledgeBase& kb, std::string_view typeName) {
  for (const auto& name : kb.ancestry(typeName))
    if (const auto* s = kb.findSchema(name)) return Schema{std::string(typeName), s->fields};
  Schema s{std::string(typeName), {std::string(kTypeIntro)}};
  for (const auto& f : kb.fieldsOf(typeName)) s.fields.push_back(f.name);
  s.fields.push_back(std::string(kStoriesMarker));
  return s;
}

DocumentPlan planDocument(const KnowledgeBase& kb, const SelectionResult& selection,
                          const SessionState& session) {
  (void)session;
  if (selection.chosenFacts.empty())
    throw Error(ErrorCode::EmptySelection,
                "nothing left to say about '" + selection.entityId + "'");
  const auto& entity = kb.entity(selection.entityId);
  const auto schema = schemaFor(kb, entity.typeName);

  struct Item {
    PlanNode node;
    std::size_t priority;
    std::size_t group;  // keeps facts of one field adjacent
    std::size_t rank;
  };
  std::vector<Item> items;
  std::map<std::string, std::size_t> firstRankOfField;
  for (std::size_t rank = 0; rank < selection.chosenFacts.size(); ++rank) {
    const auto& id = selection.chosenFacts[rank];
    PlanNode node;
    node.payload = id;
    if (isTypeIntroId(id)) {
      node.kind = NodeKind::TypeIntro;
      node.field = std::string(kTypeIntro);
    } else if (const auto* f = kb.findFact(id)) {
      node.kind = NodeKind::Fact;
      node.field = f->field;
    } else if (kb.findCanned(id)) {
      node.kind = NodeKind::Canned;
      node.field = std::string(kStoriesMarker);
    } else {
      throw Error(ErrorCode::UnknownFact, "unknown fact '" + id + "'");
    }
    firstRankOfField.emplace(node.field, rank);
    Candidate probe;
    probe.field = node.field;
    items.push_back({std::move(node), schemaPriority(schema, probe), 0, rank});
  }
  // chosenFacts is ranked by relevance, so an unlisted field's first rank
  // orders the unlisted groups by relevance
  for (auto& it : items) it.group = firstRankOfField[it.node.field];
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.group != b.group) return a.group < b.group;
    return a.rank < b.rank;
  });

  DocumentPlan plan;
  plan.entityId = selection.entityId;
  for (auto& it : items) {
    auto& node = it.node;
    if (plan.nodes.empty()) {
      node.relation = Relation::First;
    } else {
      node.relation = Relation::Elaboration;
      const auto& prev = plan.nodes.back();
      if (prev.kind == NodeKind::Fact && node.kind == NodeKind::Fact && prev.field == node.field) {
        const auto& a = kb.fact(prev.payload);
        const auto& b = kb.fact(node.payload);
        if (!(a.value == b.value)) node.relation = Relation::Contrast;
      }
    }
    plan.nodes.push_back(node);
    if (selection.comparison && selection.comparison->factId == node.payload) {
      PlanNode cmp;
      cmp.kind = NodeKind::Comparison;
      cmp.payload = node.payload;
      cmp.field = node.field;
      cmp.relation = Relation::ComparisonRestate;
      cmp.comparison = selection.comparison;
      plan.nodes.push_back(std::move(cmp));
    }
  }
  return plan;
}

}  // namespace scribe
