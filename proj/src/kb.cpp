#include "scribe/kb.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace scribe {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

bool inUnitInterval(double v) { return v >= 0.0 && v <= 1.0 && !std::isnan(v); }

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

bool isIdentifier(std::string_view s) {
  if (s.empty() || s.front() == '-' || s.back() == '-') return false;
  char prev = 0;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok || (c == '-' && prev == '-')) return false;
    prev = c;
  }
  return true;
}

std::string_view to_string(FieldKind kind) {
  return kind == FieldKind::Relation ? "relation" : "attribute";
}

std::string_view to_string(Datatype type) {
  switch (type) {
    case Datatype::LocalizedString: return "string";
    case Datatype::Date: return "date";
    case Datatype::Number: return "number";
    case Datatype::None: break;
  }
  return "none";
}

std::string_view to_string(Voice v) { return v == Voice::Active ? "active" : "passive"; }
std::string_view to_string(Tense t) { return t == Tense::Present ? "present" : "past"; }

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Subject: return "subject";
    case Role::Object: return "object";
    case Role::Agent: return "agent";
    case Role::Oblique: return "oblique";
    case Role::None: break;
  }
  return "none";
}

std::string typeIntroId(std::string_view entityId) {
  return std::string(kTypeIntro) + ":" + std::string(entityId);
}

bool isTypeIntroId(std::string_view id) {
  return id.size() > kTypeIntro.size() && id.substr(0, kTypeIntro.size()) == kTypeIntro &&
         id[kTypeIntro.size()] == ':';
}

KnowledgeBase::KnowledgeBase() {
  types_.push_back(EntityTypeDef{std::string(kRootType), std::nullopt, {}});
  reindex();
}

bool KnowledgeBase::operator==(const KnowledgeBase& o) const {
  return types_ == o.types_ && entities_ == o.entities_ && facts_ == o.facts_ &&
         canned_ == o.canned_ && schemas_ == o.schemas_ && userTypes_ == o.userTypes_ &&
         templates_ == o.templates_ && lexicon_ == o.lexicon_ && languages_ == o.languages_;
}

void KnowledgeBase::reindex() {
  typeIndex_.clear();
  entityIndex_.clear();
  factIndex_.clear();
  for (std::size_t i = 0; i < types_.size(); ++i) typeIndex_.emplace(types_[i].name, i);
  for (std::size_t i = 0; i < entities_.size(); ++i) entityIndex_.emplace(entities_[i].id, i);
  for (std::size_t i = 0; i < facts_.size(); ++i) factIndex_.emplace(facts_[i].id, i);
}

// ---------------------------------------------------------------- types

const EntityTypeDef* KnowledgeBase::findType(std::string_view name) const {
  auto it = typeIndex_.find(std::string(name));
  return it == typeIndex_.end() ? nullptr : &types_[it->second];
}

const EntityTypeDef& KnowledgeBase::type(std::string_view name) const {
  const auto* t = findType(name);
  if (!t) fail(ErrorCode::UnknownType, "unknown entity type " + quote(name));
  return *t;
}

void KnowledgeBase::requireType(std::string_view name) const { (void)type(name); }

std::vector<std::string> KnowledgeBase::ancestry(std::string_view typeName) const {
  std::vector<std::string> chain;
  const EntityTypeDef* t = &type(typeName);
  std::set<std::string> seen;
  while (t) {
    if (!seen.insert(t->name).second) break;  // cycle in an unvalidated KB
    chain.push_back(t->name);
    t = t->parent ? findType(*t->parent) : nullptr;
  }
  return chain;
}

std::vector<std::string> KnowledgeBase::subtypes(std::string_view typeName) const {
  std::vector<std::string> out;
  for (const auto& t : types_)
    if (t.name != typeName && isSubtype(t.name, typeName)) out.push_back(t.name);
  return out;
}

bool KnowledgeBase::isSubtype(std::string_view a, std::string_view b) const {
  requireType(b);
  for (const auto& name : ancestry(a))
    if (name == b) return true;
  return false;
}

std::vector<FieldDef> KnowledgeBase::fieldsOf(std::string_view typeName) const {
  auto chain = ancestry(typeName);
  std::vector<FieldDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    for (const auto& f : type(*it).fields) out.push_back(f);
  return out;
}

std::optional<FieldDef> KnowledgeBase::findField(std::string_view typeName,
                                                 std::string_view fieldName) const {
  for (const auto& name : ancestry(typeName))
    for (const auto& f : type(name).fields)
      if (f.name == fieldName) return f;
  return std::nullopt;
}

const EntityTypeDef* KnowledgeBase::fieldOwner(std::string_view fieldName) const {
  for (const auto& t : types_)
    for (const auto& f : t.fields)
      if (f.name == fieldName) return &t;
  return nullptr;
}

void KnowledgeBase::defineType(const std::string& name, const std::string& parent) {
  if (!isIdentifier(name)) fail(ErrorCode::InvalidIdentifier, "invalid type name " + quote(name));
  if (findType(name)) fail(ErrorCode::DuplicateType, "type " + quote(name) + " already exists");
  if (!findType(parent)) fail(ErrorCode::UnknownParent, "unknown parent type " + quote(parent));
  types_.push_back(EntityTypeDef{name, parent, {}});
  reindex();
}

void KnowledgeBase::defineField(const std::string& typeName, const FieldDef& field) {
  requireType(typeName);
  if (!isIdentifier(field.name) || field.name == kTypeIntro || field.name == kStoriesMarker)
    fail(ErrorCode::InvalidIdentifier, "invalid field name " + quote(field.name));
  // Collisions up the chain (inherited) and down the chain (subtypes).
  if (findField(typeName, field.name))
    fail(ErrorCode::FieldNameCollision,
         "field " + quote(field.name) + " is already available on " + quote(typeName));
  for (const auto& sub : subtypes(typeName))
    for (const auto& f : type(sub).fields)
      if (f.name == field.name)
        fail(ErrorCode::FieldNameCollision,
             "field " + quote(field.name) + " is already introduced by subtype " + quote(sub));
  if (field.kind == FieldKind::Relation) {
    if (!findType(field.fillerType))
      fail(ErrorCode::BadFillerType, "unknown filler type " + quote(field.fillerType));
    if (field.cannedText)
      fail(ErrorCode::BadFillerType, "canned text is only valid on string attributes");
  } else {
    if (field.datatype == Datatype::None)
      fail(ErrorCode::BadFillerType, "attribute " + quote(field.name) + " needs a datatype");
    if (field.cannedText && field.datatype != Datatype::LocalizedString)
      fail(ErrorCode::BadFillerType, "canned text is only valid on string attributes");
  }
  auto& t = types_[typeIndex_.at(typeName)];
  FieldDef copy = field;
  if (copy.kind == FieldKind::Relation) copy.datatype = Datatype::None;
  else copy.fillerType.clear();
  t.fields.push_back(std::move(copy));
}

void KnowledgeBase::modifyField(const std::string& typeName, const FieldDef& field) {
  auto& t = types_[typeIndex_.at(type(typeName).name)];
  auto it = std::find_if(t.fields.begin(), t.fields.end(),
                         [&](const FieldDef& f) { return f.name == field.name; });
  if (it == t.fields.end())
    fail(ErrorCode::UnknownField, "type " + quote(typeName) + " does not introduce " +
                                      quote(field.name));
  auto index = static_cast<std::size_t>(it - t.fields.begin());
  FieldDef saved = *it;
  t.fields.erase(it);
  auto& fields = types_[typeIndex_.at(typeName)].fields;
  try {
    defineField(typeName, field);
  } catch (...) {
    fields.insert(fields.begin() + static_cast<std::ptrdiff_t>(index), saved);
    throw;
  }
  // defineField appended; move it back to the original position
  std::rotate(fields.begin() + static_cast<std::ptrdiff_t>(index), fields.end() - 1, fields.end());
}

void KnowledgeBase::renameType(const std::string& from, const std::string& to) {
  requireType(from);
  if (from == kRootType) fail(ErrorCode::InvalidEdit, "the root type cannot be renamed");
  if (!isIdentifier(to)) fail(ErrorCode::InvalidIdentifier, "invalid type name " + quote(to));
  if (findType(to)) fail(ErrorCode::DuplicateType, "type " + quote(to) + " already exists");
  for (auto& t : types_) {
    if (t.name == from) t.name = to;
    if (t.parent && *t.parent == from) t.parent = to;
    for (auto& f : t.fields)
      if (f.kind == FieldKind::Relation && f.fillerType == from) f.fillerType = to;
  }
  for (auto& e : entities_)
    if (e.typeName == from) e.typeName = to;
  for (auto& c : canned_)
    if (c.attachKind == AttachKind::Type && c.attachedTo == from) c.attachedTo = to;
  for (auto& s : schemas_)
    if (s.entityType == from) s.entityType = to;
  if (auto node = lexicon_.typeNouns.extract(from)) {
    node.key() = to;
    lexicon_.typeNouns.insert(std::move(node));
  }
  reindex();
}

void KnowledgeBase::renameField(const std::string& typeName, const std::string& from,
                                const std::string& to) {
  auto& t = types_[typeIndex_.at(type(typeName).name)];
  auto it = std::find_if(t.fields.begin(), t.fields.end(),
                         [&](const FieldDef& f) { return f.name == from; });
  if (it == t.fields.end())
    fail(ErrorCode::UnknownField, "type " + quote(typeName) + " does not introduce " + quote(from));
  if (!isIdentifier(to) || to == kTypeIntro || to == kStoriesMarker)
    fail(ErrorCode::InvalidIdentifier, "invalid field name " + quote(to));
  if (fieldOwner(to))
    fail(ErrorCode::FieldNameCollision, "field " + quote(to) + " already exists");
  it->name = to;
  for (auto& f : facts_)
    if (f.field == from) f.field = to;
  for (auto& tm : templates_)
    if (tm.field == from) tm.field = to;
  for (auto& s : schemas_)
    std::replace(s.fields.begin(), s.fields.end(), from, to);
}

void KnowledgeBase::removeType(const std::string& name) {
  requireType(name);
  if (name == kRootType) fail(ErrorCode::InvalidEdit, "the root type cannot be removed");
  for (const auto& t : types_)
    if (t.parent && *t.parent == name)
      fail(ErrorCode::TypeInUse, "type " + quote(name) + " has subtype " + quote(t.name));
  for (const auto& e : entities_)
    if (e.typeName == name)
      fail(ErrorCode::TypeInUse, "type " + quote(name) + " has entity " + quote(e.id));
  for (const auto& t : types_)
    for (const auto& f : t.fields)
      if (f.kind == FieldKind::Relation && f.fillerType == name)
        fail(ErrorCode::TypeInUse, "type " + quote(name) + " is the filler type of " +
                                       quote(f.name));
  std::erase_if(types_, [&](const EntityTypeDef& t) { return t.name == name; });
  std::erase_if(schemas_, [&](const Schema& s) { return s.entityType == name; });
  std::erase_if(canned_, [&](const CannedParagraph& c) {
    return c.attachKind == AttachKind::Type && c.attachedTo == name;
  });
  lexicon_.typeNouns.erase(name);
  reindex();
}

void KnowledgeBase::loadType(EntityTypeDef def) {
  if (def.name == kRootType) {
    types_[typeIndex_.at(std::string(kRootType))].fields = std::move(def.fields);
    return;
  }
  types_.push_back(std::move(def));
  reindex();
}

// ---------------------------------------------------------------- entities

const Entity* KnowledgeBase::findEntity(std::string_view id) const {
  auto it = entityIndex_.find(std::string(id));
  return it == entityIndex_.end() ? nullptr : &entities_[it->second];
}

const Entity& KnowledgeBase::entity(std::string_view id) const {
  const auto* e = findEntity(id);
  if (!e) fail(ErrorCode::UnknownEntity, "unknown entity " + quote(id));
  return *e;
}

const Entity* KnowledgeBase::genericOf(std::string_view typeName) const {
  for (const auto& e : entities_)
    if (e.generic && e.typeName == typeName) return &e;
  return nullptr;
}

void KnowledgeBase::addEntity(const Entity& entity) {
  if (!isIdentifier(entity.id)) fail(ErrorCode::InvalidIdentifier, "invalid entity id " + quote(entity.id));
  if (findEntity(entity.id)) fail(ErrorCode::DuplicateEntity, "entity " + quote(entity.id) + " already exists");
  requireType(entity.typeName);
  if (entity.generic && genericOf(entity.typeName))
    fail(ErrorCode::DuplicateGeneric, "type " + quote(entity.typeName) + " already has a generic entity");
  if (!entity.modifier.empty() && !isIdentifier(entity.modifier))
    fail(ErrorCode::InvalidIdentifier, "invalid modifier sense " + quote(entity.modifier));
  entities_.push_back(entity);
  reindex();
}

void KnowledgeBase::removeEntity(const std::string& id) {
  (void)entity(id);
  for (const auto& f : facts_)
    if (f.owner != id) {
      if (auto* ref = std::get_if<EntityRef>(&f.value); ref && ref->id == id)
        fail(ErrorCode::TypeInUse, "entity " + quote(id) + " is the value of fact " + quote(f.id));
    }
  std::erase_if(facts_, [&](const Fact& f) { return f.owner == id; });
  std::erase_if(canned_, [&](const CannedParagraph& c) {
    return c.attachKind == AttachKind::Entity && c.attachedTo == id;
  });
  std::erase_if(entities_, [&](const Entity& e) { return e.id == id; });
  reindex();
}

void KnowledgeBase::setEntityName(const std::string& id, const std::string& language,
                                  const ProperName& name) {
  (void)entity(id);
  auto& e = entities_[entityIndex_.at(id)];
  if (name.text.empty()) e.names.erase(language);
  else e.names[language] = name;
}

void KnowledgeBase::loadEntity(Entity entity) {
  entities_.push_back(std::move(entity));
  reindex();
}

// ---------------------------------------------------------------- facts

const Fact* KnowledgeBase::findFact(std::string_view id) const {
  auto it = factIndex_.find(std::string(id));
  return it == factIndex_.end() ? nullptr : &facts_[it->second];
}

const Fact& KnowledgeBase::fact(std::string_view id) const {
  const auto* f = findFact(id);
  if (!f) fail(ErrorCode::UnknownFact, "unknown fact " + quote(id));
  return *f;
}

std::vector<const Fact*> KnowledgeBase::factsOf(std::string_view owner) const {
  std::vector<const Fact*> out;
  for (const auto& f : facts_)
    if (f.owner == owner) out.push_back(&f);
  return out;
}

std::string KnowledgeBase::uniqueFactId(const std::string& owner, const std::string& field) const {
  std::string base = owner + "-" + field;
  if (!findFact(base) && !findCanned(base)) return base;
  for (int n = 2;; ++n) {
    std::string id = base + "-" + std::to_string(n);
    if (!findFact(id) && !findCanned(id)) return id;
  }
}

void KnowledgeBase::checkValue(const FieldDef& field, const FactValue& value) const {
  if (field.kind == FieldKind::Relation) {
    const auto* ref = std::get_if<EntityRef>(&value);
    if (!ref) fail(ErrorCode::TypeMismatch, "field " + quote(field.name) + " expects an entity");
    const auto& filler = entity(ref->id);
    if (!isSubtype(filler.typeName, field.fillerType))
      fail(ErrorCode::TypeMismatch, quote(ref->id) + " is a " + filler.typeName + ", not a " +
                                        field.fillerType);
    return;
  }
  bool ok = false;
  switch (field.datatype) {
    case Datatype::LocalizedString: ok = std::holds_alternative<LocalizedText>(value); break;
    case Datatype::Date: ok = std::holds_alternative<Date>(value); break;
    case Datatype::Number: ok = std::holds_alternative<double>(value); break;
    case Datatype::None: break;
  }
  if (!ok)
    fail(ErrorCode::TypeMismatch,
         "field " + quote(field.name) + " expects a " + std::string(to_string(field.datatype)));
}

std::string KnowledgeBase::assertFact(const std::string& owner, const std::string& field,
                                      const FactValue& value, const ScoreMap& scores,
                                      const std::string& id) {
  const auto& e = entity(owner);
  auto def = findField(e.typeName, field);
  if (!def)
    fail(ErrorCode::UnknownField, "field " + quote(field) + " is not available on " + quote(e.typeName));
  checkValue(*def, value);
  if (e.generic && def->setValued)
    fail(ErrorCode::CardinalityViolation, "generic entities may not fill set-valued fields");
  if (!def->setValued) {
    for (const auto* f : factsOf(owner))
      if (f->field == field)
        fail(ErrorCode::CardinalityViolation,
             quote(owner) + " already has a value for single-valued field " + quote(field));
  } else {
    for (const auto* f : factsOf(owner))
      if (f->field == field && f->value == value)
        fail(ErrorCode::CardinalityViolation, "duplicate value for " + quote(field));
  }
  for (const auto& [ut, s] : scores) {
    if (!findUserType(ut)) fail(ErrorCode::UnknownUserType, "unknown user type " + quote(ut));
    if (!inUnitInterval(s.interest) || !inUnitInterval(s.importance) ||
        !inUnitInterval(s.baseAssimilation))
      fail(ErrorCode::InvalidScore, "scores must lie in [0,1]");
  }
  std::string factId = id.empty() ? uniqueFactId(owner, field) : id;
  if (!isIdentifier(factId)) fail(ErrorCode::InvalidIdentifier, "invalid fact id " + quote(factId));
  if (findFact(factId) || findCanned(factId))
    fail(ErrorCode::InvalidEdit, "id " + quote(factId) + " is already in use");
  facts_.push_back(Fact{factId, owner, field, value, scores});
  reindex();
  return factId;
}

void KnowledgeBase::retractFact(const std::string& id) {
  (void)fact(id);
  std::erase_if(facts_, [&](const Fact& f) { return f.id == id; });
  reindex();
}

void KnowledgeBase::setScores(const std::string& factId, const std::string& userType,
                              const FactScores& scores) {
  (void)fact(factId);
  (void)this->userType(userType);
  if (!inUnitInterval(scores.interest) || !inUnitInterval(scores.importance) ||
      !inUnitInterval(scores.baseAssimilation))
    fail(ErrorCode::InvalidScore, "scores must lie in [0,1]");
  facts_[factIndex_.at(factId)].scores[userType] = scores;
}

void KnowledgeBase::loadFact(Fact fact) {
  facts_.push_back(std::move(fact));
  reindex();
}

std::vector<Fact> KnowledgeBase::effectiveFacts(std::string_view entityId) const {
  const auto& e = entity(entityId);
  if (e.generic)
    fail(ErrorCode::GenericEntityQueried, quote(entityId) + " is a generic entity");
  std::vector<Fact> out;
  std::set<std::string> filled;
  for (const auto* f : factsOf(e.id)) {
    out.push_back(*f);
    filled.insert(f->field);
  }
  for (const auto& typeName : ancestry(e.typeName)) {
    const auto* generic = genericOf(typeName);
    if (!generic) continue;
    std::set<std::string> contributed;
    for (const auto* f : factsOf(generic->id)) {
      if (filled.count(f->field)) continue;
      out.push_back(*f);
      contributed.insert(f->field);
    }
    filled.insert(contributed.begin(), contributed.end());
  }
  return out;
}

// ---------------------------------------------------------------- canned

const CannedParagraph* KnowledgeBase::findCanned(std::string_view id) const {
  for (const auto& c : canned_)
    if (c.id == id) return &c;
  return nullptr;
}

void KnowledgeBase::addCanned(const CannedParagraph& paragraph) {
  if (!isIdentifier(paragraph.id)) fail(ErrorCode::InvalidIdentifier, "invalid paragraph id " + quote(paragraph.id));
  if (findCanned(paragraph.id) || findFact(paragraph.id))
    fail(ErrorCode::InvalidEdit, "id " + quote(paragraph.id) + " is already in use");
  if (paragraph.attachKind == AttachKind::Type) requireType(paragraph.attachedTo);
  else (void)entity(paragraph.attachedTo);
  if (paragraph.text.empty())
    fail(ErrorCode::InvalidEdit, "paragraph " + quote(paragraph.id) + " has no text");
  canned_.push_back(paragraph);
}

void KnowledgeBase::removeCanned(const std::string& id) {
  if (!findCanned(id)) fail(ErrorCode::UnknownFact, "unknown paragraph " + quote(id));
  std::erase_if(canned_, [&](const CannedParagraph& c) { return c.id == id; });
}

void KnowledgeBase::setCannedScores(const std::string& id, const std::string& userType,
                                    const FactScores& scores) {
  if (!findCanned(id)) fail(ErrorCode::UnknownFact, "unknown paragraph " + quote(id));
  (void)this->userType(userType);
  if (!inUnitInterval(scores.interest) || !inUnitInterval(scores.importance) ||
      !inUnitInterval(scores.baseAssimilation))
    fail(ErrorCode::InvalidScore, "scores must lie in [0,1]");
  for (auto& c : canned_)
    if (c.id == id) c.scores[userType] = scores;
}

void KnowledgeBase::loadCanned(CannedParagraph paragraph) { canned_.push_back(std::move(paragraph)); }

std::vector<const CannedParagraph*> KnowledgeBase::cannedFor(std::string_view entityId) const {
  const auto& e = entity(entityId);
  std::vector<const CannedParagraph*> out;
  for (const auto& c : canned_)
    if (c.attachKind == AttachKind::Entity && c.attachedTo == e.id) out.push_back(&c);
  for (const auto& typeName : ancestry(e.typeName))
    for (const auto& c : canned_)
      if (c.attachKind == AttachKind::Type && c.attachedTo == typeName) out.push_back(&c);
  return out;
}

std::vector<std::string> KnowledgeBase::storiesOf(std::string_view typeName) const {
  std::vector<std::string> out;
  for (const auto& c : canned_)
    if (c.attachKind == AttachKind::Type && c.attachedTo == typeName) out.push_back(c.id);
  return out;
}

// ---------------------------------------------------------------- schemas etc.

void KnowledgeBase::setSchema(const Schema& schema) {
  requireType(schema.entityType);
  for (auto& s : schemas_)
    if (s.entityType == schema.entityType) {
      s = schema;
      return;
    }
  schemas_.push_back(schema);
}

void KnowledgeBase::removeSchema(const std::string& typeName) {
  std::erase_if(schemas_, [&](const Schema& s) { return s.entityType == typeName; });
}

const Schema* KnowledgeBase::findSchema(std::string_view typeName) const {
  for (const auto& s : schemas_)
    if (s.entityType == typeName) return &s;
  return nullptr;
}

void KnowledgeBase::setUserType(const UserTypeDef& def) {
  if (!isIdentifier(def.name)) fail(ErrorCode::InvalidIdentifier, "invalid user type " + quote(def.name));
  if (def.defaultMaxFacts < 1) fail(ErrorCode::InvalidEdit, "defaultMaxFacts must be at least 1");
  for (auto& u : userTypes_)
    if (u.name == def.name) {
      u = def;
      return;
    }
  userTypes_.push_back(def);
}

const UserTypeDef* KnowledgeBase::findUserType(std::string_view name) const {
  for (const auto& u : userTypes_)
    if (u.name == name) return &u;
  return nullptr;
}

const UserTypeDef& KnowledgeBase::userType(std::string_view name) const {
  const auto* u = findUserType(name);
  if (!u) fail(ErrorCode::UnknownUserType, "unknown user type " + quote(name));
  return *u;
}

FactScores KnowledgeBase::scoresFor(const ScoreMap& scores, std::string_view userType) const {
  if (auto it = scores.find(std::string(userType)); it != scores.end()) return it->second;
  return this->userType(userType).defaultScores;
}

void KnowledgeBase::addTemplate(const ClauseTemplate& tmpl) { templates_.push_back(tmpl); }

void KnowledgeBase::setTemplates(const std::string& field, const std::string& language,
                                 std::vector<ClauseTemplate> templates) {
  std::vector<ClauseTemplate> kept;
  bool inserted = false;
  for (auto& t : templates_) {
    if (t.field == field && t.language == language) {
      if (!inserted) {
        for (auto& n : templates) kept.push_back(n);
        inserted = true;
      }
      continue;
    }
    kept.push_back(std::move(t));
  }
  if (!inserted)
    for (auto& n : templates) kept.push_back(n);
  templates_ = std::move(kept);
}

std::vector<const ClauseTemplate*> KnowledgeBase::templatesFor(std::string_view field,
                                                               std::string_view language) const {
  std::vector<const ClauseTemplate*> out;
  for (const auto& t : templates_)
    if (t.field == field && t.language == language) out.push_back(&t);
  return out;
}

bool KnowledgeBase::languageEnabled(std::string_view code) const {
  return std::find(languages_.begin(), languages_.end(), code) != languages_.end();
}

// ---------------------------------------------------------------- values

std::string valueText(const FactValue& value, std::string_view language,
                      const KnowledgeBase& kb, std::string_view eraSuffix) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EntityRef>) {
          const auto* e = kb.findEntity(v.id);
          if (e)
            if (auto it = e->names.find(std::string(language)); it != e->names.end())
              return it->second.text;
          return v.id;
        } else if constexpr (std::is_same_v<T, Date>) {
          std::ostringstream os;
          if (v.day > 0 && v.month > 0) os << v.day << "/" << v.month << "/";
          else if (v.month > 0) os << v.month << "/";
          os << std::abs(v.year);
          if (v.year < 0 && !eraSuffix.empty()) os << " " << eraSuffix;
          return os.str();
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os << v;
          return os.str();
        } else {
          auto it = v.find(std::string(language));
          return it == v.end() ? std::string() : it->second;
        }
      },
      value);
}

// ---------------------------------------------------------------- validation

namespace {

struct Collector {
  Diagnostics diags;
  void error(std::string loc, std::string msg) {
    diags.push_back({Severity::Error, std::move(loc), std::move(msg)});
  }
  void warning(std::string loc, std::string msg) {
    diags.push_back({Severity::Warning, std::move(loc), std::move(msg)});
  }
};

void checkScores(Collector& c, const KnowledgeBase& kb, const ScoreMap& scores,
                 const std::string& loc) {
  for (const auto& [ut, s] : scores) {
    if (!kb.findUserType(ut)) c.error(loc, "scores for unknown user type '" + ut + "'");
    if (!inUnitInterval(s.interest) || !inUnitInterval(s.importance) ||
        !inUnitInterval(s.baseAssimilation))
      c.error(loc, "scores for '" + ut + "' must lie in [0,1]");
  }
}

}  // namespace

Diagnostics validate(const KnowledgeBase& kb) {
  Collector c;

  // types: unique names, known parents, tree rooted at "entity"
  std::set<std::string> typeNames;
  for (const auto& t : kb.types()) {
    std::string loc = "types/" + t.name;
    if (!typeNames.insert(t.name).second) c.error(loc, "duplicate type");
    if (!isIdentifier(t.name)) c.error(loc, "type name is not a valid identifier");
    if (t.name == kRootType) {
      if (t.parent) c.error(loc, "the root type has no parent");
      continue;
    }
    if (!t.parent) {
      c.error(loc, "type has no parent");
      continue;
    }
    if (!kb.findType(*t.parent)) {
      c.error(loc, "unknown parent '" + *t.parent + "'");
      continue;
    }
    std::set<std::string> seen{t.name};
    const EntityTypeDef* p = kb.findType(*t.parent);
    bool rooted = false;
    while (p) {
      if (p->name == kRootType) {
        rooted = true;
        break;
      }
      if (!seen.insert(p->name).second) break;
      p = p->parent ? kb.findType(*p->parent) : nullptr;
    }
    if (!rooted) c.error(loc, "type is not connected to the root (cycle or dangling parent)");
  }
  bool treeOk = !has_errors(c.diags);

  // fields
  std::map<std::string, std::string> fieldIntro;
  for (const auto& t : kb.types()) {
    for (const auto& f : t.fields) {
      std::string loc = "types/" + t.name + "/fields/" + f.name;
      if (!isIdentifier(f.name) || f.name == kTypeIntro || f.name == kStoriesMarker)
        c.error(loc, "invalid field name");
      if (auto [it, fresh] = fieldIntro.emplace(f.name, t.name); !fresh) {
        bool related = treeOk && (kb.isSubtype(t.name, it->second) || kb.isSubtype(it->second, t.name));
        if (related || it->second == t.name)
          c.error(loc, "field name collides with the one introduced on '" + it->second + "'");
      }
      if (f.kind == FieldKind::Relation) {
        if (!kb.findType(f.fillerType)) c.error(loc, "unknown filler type '" + f.fillerType + "'");
        if (f.cannedText) c.error(loc, "canned text is only valid on string attributes");
      } else {
        if (f.datatype == Datatype::None) c.error(loc, "attribute without datatype");
        if (f.cannedText && f.datatype != Datatype::LocalizedString)
          c.error(loc, "canned text is only valid on string attributes");
      }
    }
  }

  // entities
  std::set<std::string> entityIds;
  std::map<std::string, std::string> genericByType;
  for (const auto& e : kb.entities()) {
    std::string loc = "entities/" + e.id;
    if (!isIdentifier(e.id)) c.error(loc, "entity id is not a valid identifier");
    if (!entityIds.insert(e.id).second) c.error(loc, "duplicate entity id");
    if (!kb.findType(e.typeName)) c.error(loc, "unknown type '" + e.typeName + "'");
    if (e.generic) {
      if (auto [it, fresh] = genericByType.emplace(e.typeName, e.id); !fresh)
        c.error(loc, "type '" + e.typeName + "' already has generic entity '" + it->second + "'");
    }
    for (const auto& [lang, name] : e.names)
      if (!kb.languageEnabled(lang))
        c.warning(loc, "proper name in language '" + lang + "' which is not enabled");
    if (!e.modifier.empty()) {
      bool any = false;
      for (const auto& a : kb.lexicon().adjectives) any = any || a.sense == e.modifier;
      if (!any) c.error(loc, "unknown modifier sense '" + e.modifier + "'");
    }
  }

  // facts
  std::set<std::string> factIds;
  std::map<std::pair<std::string, std::string>, int> cardinality;
  for (const auto& f : kb.facts()) {
    std::string loc = "facts/" + f.id;
    if (!isIdentifier(f.id)) c.error(loc, "fact id is not a valid identifier");
    if (!factIds.insert(f.id).second) c.error(loc, "duplicate fact id");
    const auto* owner = kb.findEntity(f.owner);
    if (!owner) {
      c.error(loc, "unknown owner '" + f.owner + "'");
      continue;
    }
    if (!treeOk || !kb.findType(owner->typeName)) continue;
    auto def = kb.findField(owner->typeName, f.field);
    if (!def) {
      c.error(loc, "field '" + f.field + "' is not available on '" + owner->typeName + "'");
      continue;
    }
    if (def->kind == FieldKind::Relation) {
      const auto* ref = std::get_if<EntityRef>(&f.value);
      if (!ref) {
        c.error(loc, "relation value must be an entity");
      } else if (const auto* filler = kb.findEntity(ref->id); !filler) {
        c.error(loc, "dangling filler reference '" + ref->id + "'");
      } else if (kb.findType(filler->typeName) && kb.findType(def->fillerType) &&
                 !kb.isSubtype(filler->typeName, def->fillerType)) {
        c.error(loc, "filler '" + ref->id + "' is not a " + def->fillerType);
      }
    } else {
      bool ok = (def->datatype == Datatype::LocalizedString && std::holds_alternative<LocalizedText>(f.value)) ||
                (def->datatype == Datatype::Date && std::holds_alternative<Date>(f.value)) ||
                (def->datatype == Datatype::Number && std::holds_alternative<double>(f.value));
      if (!ok) c.error(loc, "value does not match datatype " + std::string(to_string(def->datatype)));
      if (const auto* text = std::get_if<LocalizedText>(&f.value)) {
        for (const auto& lang : kb.languages()) {
          auto it = text->find(lang);
          if (it == text->end())
            c.warning(loc, std::string(def->cannedText ? "canned" : "string") +
                               " value is missing language '" + lang + "'");
          else if (it->second.empty())
            c.warning(loc, "empty value for language '" + lang + "'");
        }
      }
    }
    if (owner->generic && def->setValued) c.error(loc, "generic entities may not fill set-valued fields");
    if (!def->setValued && ++cardinality[{f.owner, f.field}] > 1)
      c.error(loc, "second value for single-valued field '" + f.field + "'");
    checkScores(c, kb, f.scores, loc);
  }

  // canned paragraphs
  for (const auto& p : kb.canned()) {
    std::string loc = "canned/" + p.id;
    if (!isIdentifier(p.id)) c.error(loc, "paragraph id is not a valid identifier");
    if (factIds.count(p.id)) c.error(loc, "paragraph id collides with a fact id");
    if (p.attachKind == AttachKind::Type ? !kb.findType(p.attachedTo) : !kb.findEntity(p.attachedTo))
      c.error(loc, "attached to unknown " +
                       std::string(p.attachKind == AttachKind::Type ? "type" : "entity") + " '" +
                       p.attachedTo + "'");
    if (p.text.empty()) c.error(loc, "paragraph has no text in any language");
    for (const auto& lang : kb.languages()) {
      auto it = p.text.find(lang);
      if (it == p.text.end()) c.warning(loc, "canned text is missing language '" + lang + "'");
      else if (it->second.empty()) c.warning(loc, "empty canned text for language '" + lang + "'");
    }
    checkScores(c, kb, p.scores, loc);
  }

  // schemas
  std::set<std::string> schemaTypes;
  for (const auto& s : kb.schemas()) {
    std::string loc = "schemas/" + s.entityType;
    if (!schemaTypes.insert(s.entityType).second) c.error(loc, "duplicate schema");
    if (!kb.findType(s.entityType)) {
      c.error(loc, "unknown type");
      continue;
    }
    int intro = 0;
    for (const auto& name : s.fields) {
      if (name == kTypeIntro) {
        ++intro;
        continue;
      }
      if (name == kStoriesMarker) continue;
      if (treeOk && !kb.findField(s.entityType, name))
        c.error(loc, "field '" + name + "' is not available on the type");
    }
    if (intro > 1) c.error(loc, "'type-intro' appears more than once");
  }

  // user types
  std::set<std::string> userTypes;
  for (const auto& u : kb.userTypes()) {
    std::string loc = "userTypes/" + u.name;
    if (!userTypes.insert(u.name).second) c.error(loc, "duplicate user type");
    if (u.defaultMaxFacts < 1) c.error(loc, "defaultMaxFacts must be at least 1");
    checkScores(c, kb, {{u.name, u.defaultScores}}, loc);
  }

  // templates
  for (const auto& t : kb.templates()) {
    std::string loc = "microplans/" + t.field + "/" + t.language;
    if (!kb.fieldOwner(t.field)) c.error(loc, "unknown field");
    if (!kb.lexicon().verb(t.verb, t.language))
      c.error(loc, "verb sense '" + t.verb + "' has no entry in '" + t.language + "'");
    if (t.voice == Voice::Passive && t.ownerRole != Role::Subject && t.fillerRole != Role::Subject)
      c.error(loc, "passive template needs a subject");
    if (t.ownerRole == t.fillerRole && t.ownerRole != Role::None && t.ownerRole != Role::Oblique)
      c.error(loc, "owner and filler map onto the same role");
    if (t.ownerRole == Role::None) c.error(loc, "owner must be expressed");
    if ((t.ownerRole == Role::Oblique || t.fillerRole == Role::Oblique) && t.preposition.empty())
      c.error(loc, "oblique role without preposition");
  }

  // lexicon type attachments
  for (const auto& [typeName, senses] : kb.lexicon().typeNouns) {
    std::string loc = "lexicon/typeNouns/" + typeName;
    if (!kb.findType(typeName)) c.error(loc, "unknown type");
    for (const auto& sense : senses) {
      bool any = false;
      for (const auto& n : kb.lexicon().nouns) any = any || n.sense == sense;
      if (!any) c.error(loc, "unknown noun sense '" + sense + "'");
    }
  }
  std::set<std::pair<std::string, std::string>> lexKeys;
  for (const auto& n : kb.lexicon().nouns)
    if (!lexKeys.insert({"n:" + n.sense, n.language}).second)
      c.error("lexicon/nouns/" + n.sense, "duplicate entry for language '" + n.language + "'");
  for (const auto& v : kb.lexicon().verbs)
    if (!lexKeys.insert({"v:" + v.sense, v.language}).second)
      c.error("lexicon/verbs/" + v.sense, "duplicate entry for language '" + v.language + "'");
  for (const auto& a : kb.lexicon().adjectives)
    if (!lexKeys.insert({"a:" + a.sense, a.language}).second)
      c.error("lexicon/adjectives/" + a.sense, "duplicate entry for language '" + a.language + "'");

  return c.diags;
}

}  // namespace scribe
