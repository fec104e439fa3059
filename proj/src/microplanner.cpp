#include "scribe/microplanner.hpp"

#include <algorithm>
#include <set>

namespace scribe {

std::string_view to_string(NpMode m) {
  switch (m) {
    case NpMode::Unset: return "unset";
    case NpMode::Name: return "name";
    case NpMode::Demonstrative: return "demonstrative";
    case NpMode::Pronoun: return "pronoun";
    case NpMode::Definite: return "definite";
    case NpMode::Indefinite: return "indefinite";
  }
  return "unset";
}

std::string_view to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::Predicate: return "predicate";
    case ClauseKind::Copular: return "copular";
    case ClauseKind::Absorbed: return "absorbed";
    case ClauseKind::Canned: return "canned";
    case ClauseKind::Comparison: return "comparison";
  }
  return "predicate";
}

Agreement referentAgreement(const KnowledgeBase& kb, const Entity& e, std::string_view language,
                            std::string_view reg) {
  if (auto it = e.names.find(std::string(language)); it != e.names.end() && !it->second.gender.empty())
    return {it->second.gender, "sg"};
  return {nounForType(e.typeName, language, reg, kb).gender, "sg"};
}

std::string registerOf(const KnowledgeBase& kb, const SessionState& session) {
  return kb.userType(session.userType).registerTag;
}

ClauseSpec clauseFromTemplate(const ClauseTemplate& tmpl, const Fact& fact,
                              const std::string& subjectEntity) {
  ClauseSpec c;
  c.kind = ClauseKind::Predicate;
  c.sourceNode = fact.id;
  c.field = fact.field;
  c.verb = tmpl.verb;
  c.voice = tmpl.voice;
  c.tense = tmpl.tense;
  c.preposition = tmpl.preposition;
  c.adjuncts = tmpl.adjuncts;
  c.value = fact.value;
  c.roles[tmpl.ownerRole] = ReferTarget{subjectEntity, std::nullopt};
  if (tmpl.fillerRole != Role::None) {
    if (const auto* ref = std::get_if<EntityRef>(&fact.value))
      c.roles[tmpl.fillerRole] = ReferTarget{ref->id, std::nullopt};
    else
      c.roles[tmpl.fillerRole] = ReferTarget{"", fact.value};
  }
  return c;
}

ClauseSpec lexicalize(const PlanNode& node, const std::string& entityId, const std::string& language,
                      SessionState& session, const KnowledgeBase& kb) {
  const auto& fact = kb.fact(node.payload);
  const auto reg = registerOf(kb, session);
  std::vector<const ClauseTemplate*> eligible;
  for (const auto* t : kb.templatesFor(fact.field, language))
    if (registerMatches(t->registers, reg)) eligible.push_back(t);
  if (eligible.empty())
    throw Error(ErrorCode::NoTemplateForField, "no clause template for field '" + fact.field +
                                                   "' in language '" + language + "' (register '" +
                                                   reg + "')");
  int& counter = session.variationCounters[fact.field];
  const auto* tmpl = eligible[static_cast<std::size_t>(counter) % eligible.size()];
  ++counter;
  auto c = clauseFromTemplate(*tmpl, fact, entityId);
  c.relation = node.relation;
  return c;
}

namespace {

bool mergeable(const ClauseSpec& c) {
  return c.kind == ClauseKind::Predicate || c.kind == ClauseKind::Copular;
}

std::string subjectOf(const ClauseSpec& c) {
  const auto* s = c.subject();
  return s && s->isEntity() ? s->entityId : std::string();
}

}  // namespace

std::vector<SentenceSpec> aggregate(const std::vector<ClauseSpec>& clauses, int maxClausesPerSentence) {
  const auto cap = static_cast<std::size_t>(std::max(maxClausesPerSentence, 1));
  std::vector<SentenceSpec> out;
  for (const auto& c : clauses) {
    if (!out.empty()) {
      auto& cur = out.back();
      const auto& last = cur.clauses.back();
      bool merge = cur.clauses.size() < cap && mergeable(last) && mergeable(c) &&
                   c.relation != Relation::Contrast && !subjectOf(c).empty() &&
                   subjectOf(c) == subjectOf(cur.clauses.front()) && c.subjectType.empty() &&
                   last.subjectType.empty();
      if (merge) {
        cur.clauses.push_back(c);
        cur.elided.push_back(true);
        continue;
      }
    }
    SentenceSpec s;
    s.clauses.push_back(c);
    s.elided.push_back(false);
    s.relation = c.relation;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct Occurrence {
  std::string entity;
  Role role;
  bool forceDemonstrative;
};

void collect(const ClauseSpec& c, bool elidedSubject, std::vector<Occurrence>& out) {
  if (c.kind == ClauseKind::Comparison) {
    out.push_back({c.previousEntity, Role::None, false});
    for (const auto& in : c.inner) collect(in, false, out);
    return;
  }
  if (c.kind == ClauseKind::Canned || c.kind == ClauseKind::Absorbed) return;
  // subject first: it is realized first under every shipped linearization
  if (const auto* s = c.subject(); s && s->isEntity() && !elidedSubject)
    out.push_back({s->entityId, Role::Subject, !c.subjectType.empty()});
  for (const auto& [role, target] : c.roles)
    if (role != Role::Subject && target.isEntity()) out.push_back({target.entityId, role, false});
}

}  // namespace

void chooseReferringExpressions(std::vector<SentenceSpec>& sentences, const std::string& focalEntity,
                                SessionState& session, const KnowledgeBase& kb,
                                const std::string& language) {
  const auto reg = registerOf(kb, session);
  std::map<std::string, std::string> keyCache;
  auto keyOf = [&](const std::string& id) -> const std::string& {
    auto it = keyCache.find(id);
    if (it != keyCache.end()) return it->second;
    auto a = referentAgreement(kb, kb.entity(id), language, reg);
    return keyCache.emplace(id, a.gender + "." + a.number).first->second;
  };

  std::set<std::string> mentioned;
  std::vector<std::string> previous;  // referents of the previous non-empty sentence
  auto uniqueInPrevious = [&](const std::string& id) {
    if (std::find(previous.begin(), previous.end(), id) == previous.end()) return false;
    for (const auto& other : previous)
      if (other != id && keyOf(other) == keyOf(id)) return false;
    return true;
  };

  for (auto& s : sentences) {
    bool absorbedOnly = s.clauses.size() == 1 && s.clauses[0].kind == ClauseKind::Absorbed;
    if (absorbedOnly) continue;
    if (s.clauses.size() == 1 && s.clauses[0].kind == ClauseKind::Canned) {
      if (!s.clauses[0].cannedText.empty()) previous.clear();
      continue;
    }
    std::vector<Occurrence> occ;
    for (std::size_t i = 0; i < s.clauses.size(); ++i) collect(s.clauses[i], s.elided[i], occ);

    for (const auto& o : occ) {
      if (s.npModes.count(o.entity)) continue;
      const auto& e = kb.entity(o.entity);
      bool named = e.names.count(language) > 0;
      NpMode mode;
      if (o.forceDemonstrative) {
        mode = NpMode::Demonstrative;
      } else if (mentioned.count(o.entity) && o.role == Role::Subject && uniqueInPrevious(o.entity)) {
        mode = NpMode::Pronoun;
      } else if (named) {
        mode = NpMode::Name;
      } else {
        mode = o.entity == focalEntity ? NpMode::Demonstrative : NpMode::Definite;
      }
      s.npModes[o.entity] = mode;
    }
    previous.clear();
    for (const auto& o : occ) {
      mentioned.insert(o.entity);
      if (std::find(previous.begin(), previous.end(), o.entity) == previous.end())
        previous.push_back(o.entity);
      session.discourse[keyOf(o.entity)] = o.entity;
    }
  }
}

ClauseSpec comparisonClause(const ComparisonCandidate& candidate, const std::string& language,
                            SessionState& session, const KnowledgeBase& kb, ClauseSpec restated) {
  const auto& prev = kb.entity(candidate.previousEntity);
  (void)nounForType(prev.typeName, language, registerOf(kb, session), kb);
  ClauseSpec c;
  c.kind = ClauseKind::Comparison;
  c.sourceNode = restated.sourceNode;
  c.field = candidate.sharedField;
  c.relation = Relation::ComparisonRestate;
  c.previousEntity = prev.id;
  c.inner.push_back(std::move(restated));
  return c;
}

ClauseSpec renderCannedNode(const PlanNode& node, const std::string& language, const KnowledgeBase& kb) {
  const LocalizedText* text = nullptr;
  if (node.kind == NodeKind::Canned) {
    const auto* p = kb.findCanned(node.payload);
    if (!p) throw Error(ErrorCode::UnknownFact, "unknown canned paragraph '" + node.payload + "'");
    text = &p->text;
  } else {
    text = std::get_if<LocalizedText>(&kb.fact(node.payload).value);
    if (!text) throw Error(ErrorCode::TypeMismatch, "'" + node.payload + "' is not a canned string");
  }
  auto it = text->find(language);
  if (it == text->end())
    throw Error(ErrorCode::CannedTextMissingLanguage,
                "'" + node.payload + "' has no text in language '" + language + "'");
  ClauseSpec c;
  c.kind = ClauseKind::Canned;
  c.sourceNode = node.payload;
  c.field = node.field;
  c.relation = node.relation;
  c.cannedText = it->second;
  return c;
}

std::vector<SentenceSpec> microplan(const DocumentPlan& plan, const std::string& language,
                                    SessionState& session, const KnowledgeBase& kb,
                                    const MicroplanConfig& config) {
  const auto& entity = kb.entity(plan.entityId);
  const auto reg = registerOf(kb, session);
  std::vector<ClauseSpec> clauses;
  std::optional<std::size_t> intro;

  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    const auto& node = plan.nodes[i];
    switch (node.kind) {
      case NodeKind::TypeIntro: {
        ClauseSpec c;
        c.kind = ClauseKind::Copular;
        c.sourceNode = node.payload;
        c.field = node.field;
        c.relation = node.relation;
        c.roles[Role::Subject] = ReferTarget{entity.id, std::nullopt};
        c.complementType = entity.typeName;
        (void)nounForType(entity.typeName, language, reg, kb);
        intro = clauses.size();
        clauses.push_back(std::move(c));
        break;
      }
      case NodeKind::Fact: {
        bool restatedNext = i + 1 < plan.nodes.size() &&
                            plan.nodes[i + 1].kind == NodeKind::Comparison &&
                            plan.nodes[i + 1].payload == node.payload;
        if (restatedNext) break;
        auto def = kb.findField(entity.typeName, node.field);
        if (def && def->cannedText) clauses.push_back(renderCannedNode(node, language, kb));
        else clauses.push_back(lexicalize(node, entity.id, language, session, kb));
        break;
      }
      case NodeKind::Canned:
        clauses.push_back(renderCannedNode(node, language, kb));
        break;
      case NodeKind::Comparison: {
        PlanNode factNode{NodeKind::Fact, node.payload, node.field, node.relation, std::nullopt};
        auto restated = lexicalize(factNode, entity.id, language, session, kb);
        clauses.push_back(comparisonClause(*node.comparison, language, session, kb, std::move(restated)));
        break;
      }
    }
  }

  // Without a proper name the first "this <noun>" already says what the
  // entity is, so the type-intro clause folds into it.
  if (intro && !entity.names.count(language)) {
    auto& c = clauses[*intro];
    bool carried = false;
    for (std::size_t j = *intro + 1; j < clauses.size() && !carried; ++j) {
      const auto& later = clauses[j];
      const auto& probe = later.kind == ClauseKind::Comparison ? later.inner.front() : later;
      carried = probe.kind == ClauseKind::Predicate && subjectOf(probe) == entity.id;
    }
    if (carried) {
      c.kind = ClauseKind::Absorbed;
    } else {
      auto chain = kb.ancestry(entity.typeName);
      for (std::size_t k = 1; k < chain.size(); ++k) {
        try {
          (void)nounForType(chain[k], language, reg, kb);
          c.subjectType = chain[k];
          break;
        } catch (const Error&) {
        }
      }
    }
  }

  auto sentences = aggregate(clauses, config.maxClausesPerSentence);
  chooseReferringExpressions(sentences, entity.id, session, kb, language);
  return sentences;
}

}  // namespace scribe
