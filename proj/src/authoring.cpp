#include "scribe/authoring.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "scribe/bundle.hpp"

namespace scribe {

namespace {

using json = nlohmann::json;

constexpr std::array kDomainOps{
    "type.add",     "type.rename",      "type.remove",    "field.add",       "field.modify",
    "field.rename", "noun.attach",      "noun.remove",    "verb.attach",     "adjective.attach",
    "template.set", "template.add",     "schema.set",     "schema.remove",   "usertype.set",
    "languages.set",
};

constexpr std::array kExhibitOps{
    "entity.add", "entity.remove", "entity.name", "fact.assert", "fact.retract",
    "scores.set", "generic.set",   "canned.add",  "canned.remove",
};

template <std::size_t N>
bool contains(const std::array<const char*, N>& ops, std::string_view op) {
  return std::any_of(ops.begin(), ops.end(), [&](const char* o) { return op == o; });
}

std::string str(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end() || !it->is_string())
    throw Error(ErrorCode::InvalidEdit, std::string("payload needs a string '") + key + "'");
  return it->get<std::string>();
}

std::string targetOr(const Edit& e, const char* key) {
  return e.target.empty() ? str(e.payload, key) : e.target;
}

template <typename Entry>
void upsert(std::vector<Entry>& entries, Entry entry) {
  auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& x) {
    return x.sense == entry.sense && x.language == entry.language;
  });
  if (it == entries.end()) entries.push_back(std::move(entry));
  else *it = std::move(entry);
}

template <typename Entry>
json formsResult(const Entry& entry, const PackSet& packs) {
  if (!packs.contains(entry.language)) return json::object();
  return {{"forms", formsOf(entry, packs.get(entry.language))}};
}

json domainEdit(KnowledgeBase& kb, const PackSet& packs, const Edit& e) {
  const auto& p = e.payload;
  const auto& op = e.op;
  if (op == "type.add") {
    kb.defineType(targetOr(e, "name"), p.value("parent", std::string("entity")));
  } else if (op == "type.rename") {
    kb.renameType(targetOr(e, "from"), str(p, "to"));
  } else if (op == "type.remove") {
    kb.removeType(targetOr(e, "name"));
  } else if (op == "field.add") {
    kb.defineField(targetOr(e, "type"), fieldFromJson(p.contains("field") ? p["field"] : p));
  } else if (op == "field.modify") {
    kb.modifyField(targetOr(e, "type"), fieldFromJson(p.contains("field") ? p["field"] : p));
  } else if (op == "field.rename") {
    kb.renameField(targetOr(e, "type"), str(p, "from"), str(p, "to"));
  } else if (op == "noun.attach") {
    auto entry = nounFromJson(p.contains("noun") ? p["noun"] : p);
    auto& lex = kb.lexicon();
    if (!e.target.empty()) {
      kb.type(e.target);
      auto& senses = lex.typeNouns[e.target];
      if (std::find(senses.begin(), senses.end(), entry.sense) == senses.end()) senses.push_back(entry.sense);
    }
    upsert(lex.nouns, entry);
    return formsResult(entry, packs);
  } else if (op == "noun.remove") {
    auto sense = targetOr(e, "sense");
    auto lang = p.value("language", std::string());
    auto& nouns = kb.lexicon().nouns;
    auto before = nouns.size();
    std::erase_if(nouns, [&](const NounEntry& n) { return n.sense == sense && (lang.empty() || n.language == lang); });
    if (nouns.size() == before) throw Error(ErrorCode::UnknownSense, "no noun entry for sense '" + sense + "'");
    if (lang.empty() || std::none_of(nouns.begin(), nouns.end(), [&](const NounEntry& n) { return n.sense == sense; }))
      for (auto& [type, senses] : kb.lexicon().typeNouns) std::erase(senses, sense);
    std::erase_if(kb.lexicon().typeNouns, [](const auto& kv) { return kv.second.empty(); });
  } else if (op == "verb.attach") {
    auto entry = verbFromJson(p.contains("verb") ? p["verb"] : p);
    upsert(kb.lexicon().verbs, entry);
    return formsResult(entry, packs);
  } else if (op == "adjective.attach") {
    auto entry = adjectiveFromJson(p.contains("adjective") ? p["adjective"] : p);
    upsert(kb.lexicon().adjectives, entry);
    return formsResult(entry, packs);
  } else if (op == "template.set") {
    std::vector<ClauseTemplate> list;
    for (const auto& t : p.at("templates")) list.push_back(templateFromJson(t));
    kb.setTemplates(targetOr(e, "field"), str(p, "language"), std::move(list));
  } else if (op == "template.add") {
    kb.addTemplate(templateFromJson(p));
  } else if (op == "schema.set") {
    auto s = schemaFromJson(p);
    if (!e.target.empty()) s.entityType = e.target;
    kb.setSchema(s);
  } else if (op == "schema.remove") {
    kb.removeSchema(targetOr(e, "type"));
  } else if (op == "usertype.set") {
    auto u = userTypeFromJson(p);
    if (!e.target.empty()) u.name = e.target;
    kb.setUserType(u);
  } else if (op == "languages.set") {
    kb.setLanguages(p.at("languages").get<std::vector<std::string>>());
  } else {
    throw Error(ErrorCode::InvalidEdit, "unknown domain edit '" + op + "'");
  }
  return json::object();
}

json exhibitEdit(KnowledgeBase& kb, const Edit& e) {
  const auto& p = e.payload;
  const auto& op = e.op;
  if (op == "entity.add") {
    auto ent = entityFromJson(p);
    if (!e.target.empty()) ent.id = e.target;
    kb.addEntity(ent);
  } else if (op == "entity.remove") {
    kb.removeEntity(targetOr(e, "id"));
  } else if (op == "entity.name") {
    kb.setEntityName(targetOr(e, "id"), str(p, "language"),
                     ProperName{str(p, "name"), p.value("gender", std::string())});
  } else if (op == "fact.assert") {
    ScoreMap scores = p.contains("scores") ? scoreMapFromJson(p["scores"]) : ScoreMap{};
    auto id = kb.assertFact(targetOr(e, "owner"), str(p, "field"), valueFromJson(p.at("value")), scores,
                            p.value("id", std::string()));
    return {{"id", id}};
  } else if (op == "fact.retract") {
    kb.retractFact(targetOr(e, "id"));
  } else if (op == "scores.set") {
    auto id = targetOr(e, "id");
    auto scores = scoresFromJson(p);
    auto ut = str(p, "userType");
    if (kb.findCanned(id)) kb.setCannedScores(id, ut, scores);
    else kb.setScores(id, ut, scores);
  } else if (op == "generic.set") {
    auto id = targetOr(e, "entity");
    const auto& ent = kb.entity(id);
    if (!ent.generic) throw Error(ErrorCode::InvalidEdit, "'" + id + "' is not a generic entity");
    auto field = str(p, "field");
    auto def = kb.findField(ent.typeName, field);
    if (!def) throw Error(ErrorCode::UnknownField, "'" + ent.typeName + "' has no field '" + field + "'");
    // a single-valued default is replaced, a set-valued one extended
    if (!def->setValued) {
      std::vector<std::string> old;
      for (const auto* f : kb.factsOf(id))
        if (f->field == field) old.push_back(f->id);
      for (const auto& o : old) kb.retractFact(o);
    }
    ScoreMap scores = p.contains("scores") ? scoreMapFromJson(p["scores"]) : ScoreMap{};
    return {{"id", kb.assertFact(id, field, valueFromJson(p.at("value")), scores)}};
  } else if (op == "canned.add") {
    auto c = cannedFromJson(p);
    if (!e.target.empty()) c.id = e.target;
    kb.addCanned(c);
  } else if (op == "canned.remove") {
    kb.removeCanned(targetOr(e, "id"));
  } else {
    throw Error(ErrorCode::InvalidEdit, "unknown exhibit edit '" + op + "'");
  }
  return json::object();
}

Diagnostic fromError(const Edit& e, ErrorCode code, const std::string& what) {
  return {Severity::Error, e.op + (e.target.empty() ? "" : " " + e.target),
          std::string(to_string(code)) + ": " + what};
}

EditResult transact(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit,
                    const std::function<json(KnowledgeBase&)>& apply) {
  EditResult out{false, kb, {}, std::nullopt, json::object()};
  KnowledgeBase candidate = kb;
  try {
    out.result = apply(candidate);
  } catch (const Error& err) {
    out.error = err.code();
    out.diagnostics.push_back(fromError(edit, err.code(), err.what()));
    return out;
  } catch (const json::exception& err) {
    out.error = ErrorCode::InvalidEdit;
    out.diagnostics.push_back(fromError(edit, ErrorCode::InvalidEdit, err.what()));
    return out;
  }
  out.diagnostics = checkAll(candidate, packs);
  if (has_errors(out.diagnostics)) return out;
  out.kb = std::move(candidate);
  out.committed = true;
  return out;
}

}  // namespace

std::string_view to_string(AuthorRole r) {
  return r == AuthorRole::DomainAuthor ? "domain-author" : "exhibit-author";
}

std::optional<AuthorRole> parseRole(std::string_view s) {
  if (s == "domain-author") return AuthorRole::DomainAuthor;
  if (s == "exhibit-author") return AuthorRole::ExhibitAuthor;
  return std::nullopt;
}

Edit editFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw Error(ErrorCode::InvalidEdit, "an edit needs a string 'op'");
  Edit e;
  e.op = j["op"].get<std::string>();
  e.target = j.value("target", std::string());
  if (j.contains("payload")) e.payload = j["payload"];
  if (!e.payload.is_object()) throw Error(ErrorCode::InvalidEdit, "edit payload must be an object");
  return e;
}

nlohmann::json editToJson(const Edit& e) {
  return {{"op", e.op}, {"target", e.target}, {"payload", e.payload}};
}

bool isDomainEdit(std::string_view op) { return contains(kDomainOps, op); }
bool isExhibitEdit(std::string_view op) { return contains(kExhibitOps, op); }

void roleCheck(AuthorRole role, const Edit& edit) {
  if (!isDomainEdit(edit.op) && !isExhibitEdit(edit.op))
    throw Error(ErrorCode::InvalidEdit, "unknown edit '" + edit.op + "'");
  if (role == AuthorRole::ExhibitAuthor && !isExhibitEdit(edit.op))
    throw Error(ErrorCode::PermissionDenied, "exhibit authors may not apply '" + edit.op + "'");
}

Diagnostics checkAll(const KnowledgeBase& kb, const PackSet& packs) {
  Diagnostics out = validate(kb);
  for (auto& d : checkAlignment(kb.lexicon(), kb.languages())) out.push_back(std::move(d));
  for (auto& d : checkLexiconAgainstPacks(kb.lexicon(), packs)) out.push_back(std::move(d));
  return out;
}

EditResult applyDomainEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit) {
  if (!isDomainEdit(edit.op)) {
    EditResult out{false, kb, {}, ErrorCode::InvalidEdit, json::object()};
    out.diagnostics.push_back(fromError(edit, ErrorCode::InvalidEdit, "not a domain edit"));
    return out;
  }
  return transact(kb, packs, edit, [&](KnowledgeBase& c) { return domainEdit(c, packs, edit); });
}

EditResult applyExhibitEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit) {
  if (!isExhibitEdit(edit.op)) {
    EditResult out{false, kb, {}, ErrorCode::InvalidEdit, json::object()};
    out.diagnostics.push_back(fromError(edit, ErrorCode::InvalidEdit, "not an exhibit edit"));
    return out;
  }
  return transact(kb, packs, edit, [&](KnowledgeBase& c) { return exhibitEdit(c, edit); });
}

EditResult applyEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit) {
  return isExhibitEdit(edit.op) ? applyExhibitEdit(kb, packs, edit) : applyDomainEdit(kb, packs, edit);
}

PreviewResult previewDescription(const KnowledgeBase& kb, const PackSet& packs,
                                 const PreviewRequest& request, const PipelineConfig& config) {
  PreviewResult out;
  Edit where{"preview", request.entityId, json::object()};
  try {
    SessionOverrides overrides;
    overrides.maxFacts = request.maxFacts;
    auto session = newSession(kb, request.userType, request.language, overrides);
    for (const auto& seen : request.simulatedHistory) describe(kb, packs, session, seen, config);
    out.description = describe(kb, packs, session, request.entityId, config);
  } catch (const Error& err) {
    out.diagnostics.push_back(fromError(where, err.code(), err.what()));
    // alignment gaps for the requested language are the usual cause
    for (auto& d : checkAlignment(kb.lexicon(), kb.languages()))
      if (d.message.find("'" + request.language + "'") != std::string::npos ||
          d.location.find(request.language) != std::string::npos)
        out.diagnostics.push_back(std::move(d));
  }
  return out;
}

}  // namespace scribe
