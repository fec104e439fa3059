#include "scribe/selection.hpp"

#include <algorithm>
#include <set>

#include "scribe/planner.hpp"

namespace scribe {

double relevance(const FactScores& scores, double assimilation) {
  double r = ((scores.interest + scores.importance) / 2.0) * (1.0 - assimilation);
  return std::clamp(r, 0.0, 1.0);
}

double relevance(const KnowledgeBase& kb, const SessionState& session, std::string_view id) {
  FactScores scores{1.0, 1.0, 0.0};
  if (isTypeIntroId(id)) {
    (void)baseAssimilation(kb, session.userType, id);
  } else if (const auto* f = kb.findFact(id)) {
    scores = kb.scoresFor(f->scores, session.userType);
  } else if (const auto* c = kb.findCanned(id)) {
    scores = kb.scoresFor(c->scores, session.userType);
  } else {
    throw Error(ErrorCode::UnknownFact, "unknown fact '" + std::string(id) + "'");
  }
  return relevance(scores, assimilationOf(session, id, kb));
}

std::vector<Candidate> candidates(const KnowledgeBase& kb, const SessionState& session,
                                  const std::string& entityId) {
  auto facts = kb.effectiveFacts(entityId);  // UnknownEntity / GenericEntityQueried
  std::vector<Candidate> out;

  Candidate intro;
  intro.id = typeIntroId(entityId);
  intro.kind = CandidateKind::TypeIntro;
  intro.field = std::string(kTypeIntro);
  intro.scores = FactScores{1.0, 1.0, 0.0};
  out.push_back(std::move(intro));

  for (auto& f : facts) {
    Candidate c;
    c.id = f.id;
    c.kind = CandidateKind::Fact;
    c.field = f.field;
    c.scores = kb.scoresFor(f.scores, session.userType);
    c.fact = std::move(f);
    out.push_back(std::move(c));
  }
  for (const auto* p : kb.cannedFor(entityId)) {
    Candidate c;
    c.id = p->id;
    c.kind = CandidateKind::Canned;
    c.field = std::string(kStoriesMarker);
    c.scores = kb.scoresFor(p->scores, session.userType);
    out.push_back(std::move(c));
  }
  for (auto& c : out) {
    c.assimilation = assimilationOf(session, c.id, kb);
    c.relevance = relevance(c.scores, c.assimilation);
  }
  return out;
}

std::size_t schemaPriority(const Schema& schema, const Candidate& c) {
  auto it = std::find(schema.fields.begin(), schema.fields.end(), c.field);
  return it == schema.fields.end() ? schema.fields.size()
                                   : static_cast<std::size_t>(it - schema.fields.begin());
}

SelectionResult selectFacts(const KnowledgeBase& kb, const SessionState& session,
                            const std::string& entityId, const SelectionConfig& config) {
  auto all = candidates(kb, session, entityId);
  std::erase_if(all, [&](const Candidate& c) { return c.assimilation >= config.theta; });

  SelectionResult result;
  result.entityId = entityId;
  result.exhausted = all.empty();
  if (all.empty()) return result;

  const auto schema = schemaFor(kb, kb.entity(entityId).typeName);
  std::sort(all.begin(), all.end(), [&](const Candidate& a, const Candidate& b) {
    bool ai = a.kind == CandidateKind::TypeIntro, bi = b.kind == CandidateKind::TypeIntro;
    if (ai != bi) return ai;
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    auto pa = schemaPriority(schema, a), pb = schemaPriority(schema, b);
    if (pa != pb) return pa < pb;
    return a.id < b.id;
  });
  auto limit = static_cast<std::size_t>(std::max(session.maxFacts, 0));
  for (std::size_t i = 0; i < all.size() && i < limit; ++i) result.chosenFacts.push_back(all[i].id);
  result.comparison = findComparison(kb, session, entityId, result.chosenFacts, config);
  return result;
}

SelectionResult sayMore(const KnowledgeBase& kb, const SessionState& session,
                        const std::string& entityId, const SelectionConfig& config) {
  (void)kb.entity(entityId);
  if (!hasDescribed(session, entityId))
    throw Error(ErrorCode::EntityNotYetDescribed,
                "'" + entityId + "' has not been described in this session");
  return selectFacts(kb, session, entityId, config);
}

std::optional<ComparisonCandidate> findComparison(const KnowledgeBase& kb, const SessionState& session,
                                                  const std::string& entityId,
                                                  const std::vector<std::string>& chosenFacts,
                                                  const SelectionConfig& config) {
  const auto* current = kb.findEntity(entityId);
  if (!current) return std::nullopt;

  // chosen relation facts eligible for comparison, in rank order
  std::vector<Fact> eligible;
  for (const auto& id : chosenFacts) {
    const auto* f = kb.findFact(id);
    if (!f || !std::holds_alternative<EntityRef>(f->value)) continue;
    auto def = kb.findField(current->typeName, f->field);
    if (!def || def->kind != FieldKind::Relation) continue;
    if (!config.comparisonFields.empty() &&
        std::find(config.comparisonFields.begin(), config.comparisonFields.end(), f->field) ==
            config.comparisonFields.end())
      continue;
    eligible.push_back(*f);
  }
  if (eligible.empty()) return std::nullopt;

  std::set<std::string> visited;
  for (const auto& record : previouslySeen(session)) {
    if (record.entityId == entityId || !visited.insert(record.entityId).second) continue;
    const auto* prev = kb.findEntity(record.entityId);
    if (!prev || prev->generic) continue;
    auto prevFacts = kb.effectiveFacts(prev->id);
    for (const auto& f : eligible)
      for (const auto& p : prevFacts)
        if (p.field == f.field && p.value == f.value)
          return ComparisonCandidate{entityId, prev->id, f.field, f.value, f.id};
  }
  return std::nullopt;
}

}  // namespace scribe
