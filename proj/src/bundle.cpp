#include "scribe/bundle.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scribe {

using nlohmann::json;

namespace {

[[noreturn]] void parseFail(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) parseFail(std::string("missing key '") + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return need(j, key).get<T>();
  } catch (const json::type_error& e) {
    parseFail(std::string("key '") + key + "': " + e.what());
  }
}

template <typename T>
T getOr(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::type_error& e) {
    parseFail(std::string("key '") + key + "': " + e.what());
  }
}

Role roleFromString(const std::string& s) {
  if (s == "subject") return Role::Subject;
  if (s == "object") return Role::Object;
  if (s == "agent") return Role::Agent;
  if (s == "oblique") return Role::Oblique;
  if (s == "none" || s.empty()) return Role::None;
  parseFail("unknown role '" + s + "'");
}

void expectObject(const json& j, const char* what) {
  if (!j.is_object()) parseFail(std::string(what) + " must be a JSON object");
}

}  // namespace

// ---------------------------------------------------------------- dates

Date parseDate(std::string_view text) {
  Date d;
  std::string_view s = text;
  bool negative = !s.empty() && s.front() == '-';
  if (negative) s.remove_prefix(1);
  auto parsePart = [&](int& out) {
    auto end = s.find('-');
    auto part = s.substr(0, end);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
      parseFail("invalid date '" + std::string(text) + "'");
    s = end == std::string_view::npos ? std::string_view() : s.substr(end + 1);
    return end != std::string_view::npos;
  };
  bool more = parsePart(d.year);
  if (negative) d.year = -d.year;
  if (more) more = parsePart(d.month);
  if (more) parsePart(d.day);
  if (d.month < 0 || d.month > 12 || d.day < 0 || d.day > 31 || (d.day > 0 && d.month == 0))
    parseFail("invalid date '" + std::string(text) + "'");
  return d;
}

std::string formatDate(const Date& d) {
  char buf[32];
  std::string out = std::to_string(d.year);
  if (d.month > 0) {
    std::snprintf(buf, sizeof buf, "-%02d", d.month);
    out += buf;
  }
  if (d.day > 0) {
    std::snprintf(buf, sizeof buf, "-%02d", d.day);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------- records

FieldDef fieldFromJson(const json& j) {
  expectObject(j, "field");
  FieldDef f;
  f.name = get<std::string>(j, "name");
  auto kind = getOr<std::string>(j, "kind", "relation");
  if (kind == "relation") {
    f.kind = FieldKind::Relation;
    f.fillerType = get<std::string>(j, "filler");
  } else if (kind == "attribute") {
    f.kind = FieldKind::Attribute;
    auto dt = get<std::string>(j, "datatype");
    if (dt == "string") f.datatype = Datatype::LocalizedString;
    else if (dt == "date") f.datatype = Datatype::Date;
    else if (dt == "number") f.datatype = Datatype::Number;
    else parseFail("unknown datatype '" + dt + "'");
  } else {
    parseFail("unknown field kind '" + kind + "'");
  }
  f.setValued = getOr(j, "setValued", false);
  f.cannedText = getOr(j, "canned", false);
  return f;
}

json fieldToJson(const FieldDef& f) {
  json j{{"name", f.name}, {"kind", to_string(f.kind)}};
  if (f.kind == FieldKind::Relation) j["filler"] = f.fillerType;
  else j["datatype"] = to_string(f.datatype);
  if (f.setValued) j["setValued"] = true;
  if (f.cannedText) j["canned"] = true;
  return j;
}

Entity entityFromJson(const json& j) {
  expectObject(j, "entity");
  Entity e;
  e.id = get<std::string>(j, "id");
  e.typeName = get<std::string>(j, "type");
  e.generic = getOr(j, "generic", false);
  e.modifier = getOr<std::string>(j, "modifier", "");
  if (auto it = j.find("names"); it != j.end()) {
    expectObject(*it, "names");
    for (const auto& [lang, v] : it->items()) {
      if (v.is_string()) e.names[lang] = ProperName{v.get<std::string>(), ""};
      else if (v.is_object()) e.names[lang] = ProperName{get<std::string>(v, "text"), getOr<std::string>(v, "gender", "")};
      else parseFail("name for '" + lang + "' must be a string or object");
    }
  }
  return e;
}

json entityToJson(const Entity& e) {
  json j{{"id", e.id}, {"type", e.typeName}};
  if (e.generic) j["generic"] = true;
  if (!e.modifier.empty()) j["modifier"] = e.modifier;
  if (!e.names.empty()) {
    json names = json::object();
    for (const auto& [lang, n] : e.names)
      names[lang] = n.gender.empty() ? json(n.text) : json{{"text", n.text}, {"gender", n.gender}};
    j["names"] = names;
  }
  return j;
}

FactValue valueFromJson(const json& j) {
  expectObject(j, "value");
  if (j.size() != 1) parseFail("value must have exactly one of entity/text/date/number");
  if (auto it = j.find("entity"); it != j.end()) return EntityRef{get<std::string>(j, "entity")};
  if (auto it = j.find("text"); it != j.end()) return get<LocalizedText>(j, "text");
  if (auto it = j.find("date"); it != j.end()) return parseDate(get<std::string>(j, "date"));
  if (auto it = j.find("number"); it != j.end()) return get<double>(j, "number");
  parseFail("value must have exactly one of entity/text/date/number");
}

json valueToJson(const FactValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EntityRef>) return json{{"entity", x.id}};
        else if constexpr (std::is_same_v<T, Date>) return json{{"date", formatDate(x)}};
        else if constexpr (std::is_same_v<T, double>) return json{{"number", x}};
        else return json{{"text", x}};
      },
      v);
}

FactScores scoresFromJson(const json& j) {
  expectObject(j, "scores");
  FactScores s;
  s.interest = getOr(j, "interest", s.interest);
  s.importance = getOr(j, "importance", s.importance);
  s.baseAssimilation = getOr(j, "assimilation", s.baseAssimilation);
  return s;
}

json scoresToJson(const FactScores& s) {
  return json{{"interest", s.interest}, {"importance", s.importance}, {"assimilation", s.baseAssimilation}};
}

ScoreMap scoreMapFromJson(const json& j) {
  ScoreMap m;
  if (j.is_null()) return m;
  expectObject(j, "scores");
  for (const auto& [ut, s] : j.items()) m[ut] = scoresFromJson(s);
  return m;
}

json scoreMapToJson(const ScoreMap& m) {
  json j = json::object();
  for (const auto& [ut, s] : m) j[ut] = scoresToJson(s);
  return j;
}

Fact factFromJson(const json& j) {
  expectObject(j, "fact");
  Fact f;
  f.id = get<std::string>(j, "id");
  f.owner = get<std::string>(j, "owner");
  f.field = get<std::string>(j, "field");
  f.value = valueFromJson(need(j, "value"));
  f.scores = scoreMapFromJson(j.value("scores", json()));
  return f;
}

json factToJson(const Fact& f) {
  json j{{"id", f.id}, {"owner", f.owner}, {"field", f.field}, {"value", valueToJson(f.value)}};
  if (!f.scores.empty()) j["scores"] = scoreMapToJson(f.scores);
  return j;
}

CannedParagraph cannedFromJson(const json& j) {
  expectObject(j, "canned paragraph");
  CannedParagraph c;
  c.id = get<std::string>(j, "id");
  const auto& at = need(j, "attachedTo");
  expectObject(at, "attachedTo");
  if (at.contains("type")) {
    c.attachKind = AttachKind::Type;
    c.attachedTo = get<std::string>(at, "type");
  } else {
    c.attachKind = AttachKind::Entity;
    c.attachedTo = get<std::string>(at, "entity");
  }
  c.text = get<LocalizedText>(j, "text");
  c.scores = scoreMapFromJson(j.value("scores", json()));
  return c;
}

json cannedToJson(const CannedParagraph& c) {
  json j{{"id", c.id},
         {"attachedTo", json{{c.attachKind == AttachKind::Type ? "type" : "entity", c.attachedTo}}},
         {"text", c.text}};
  if (!c.scores.empty()) j["scores"] = scoreMapToJson(c.scores);
  return j;
}

Schema schemaFromJson(const json& j) {
  expectObject(j, "schema");
  return Schema{get<std::string>(j, "type"), get<std::vector<std::string>>(j, "fields")};
}

json schemaToJson(const Schema& s) { return json{{"type", s.entityType}, {"fields", s.fields}}; }

UserTypeDef userTypeFromJson(const json& j) {
  expectObject(j, "user type");
  UserTypeDef u;
  u.name = get<std::string>(j, "name");
  u.registerTag = getOr<std::string>(j, "register", u.name);
  u.defaultMaxFacts = getOr(j, "maxFacts", u.defaultMaxFacts);
  if (auto it = j.find("defaultScores"); it != j.end()) u.defaultScores = scoresFromJson(*it);
  return u;
}

json userTypeToJson(const UserTypeDef& u) {
  return json{{"name", u.name},
              {"register", u.registerTag},
              {"maxFacts", u.defaultMaxFacts},
              {"defaultScores", scoresToJson(u.defaultScores)}};
}

ClauseTemplate templateFromJson(const json& j) {
  expectObject(j, "clause template");
  ClauseTemplate t;
  t.field = get<std::string>(j, "field");
  t.language = get<std::string>(j, "language");
  t.verb = get<std::string>(j, "verb");
  auto voice = getOr<std::string>(j, "voice", "active");
  if (voice != "active" && voice != "passive") parseFail("unknown voice '" + voice + "'");
  t.voice = voice == "active" ? Voice::Active : Voice::Passive;
  auto tense = getOr<std::string>(j, "tense", "present");
  if (tense != "present" && tense != "past") parseFail("unknown tense '" + tense + "'");
  t.tense = tense == "present" ? Tense::Present : Tense::Past;
  t.ownerRole = roleFromString(getOr<std::string>(j, "owner", "subject"));
  t.fillerRole = roleFromString(getOr<std::string>(j, "filler", "none"));
  t.preposition = getOr<std::string>(j, "preposition", "");
  t.registers = getOr(j, "registers", std::vector<std::string>{});
  t.adjuncts = getOr(j, "adjuncts", std::vector<std::string>{});
  return t;
}

json templateToJson(const ClauseTemplate& t) {
  json j{{"field", t.field},         {"language", t.language},
         {"verb", t.verb},           {"voice", to_string(t.voice)},
         {"tense", to_string(t.tense)}, {"owner", to_string(t.ownerRole)},
         {"filler", to_string(t.fillerRole)}};
  if (!t.preposition.empty()) j["preposition"] = t.preposition;
  if (!t.registers.empty()) j["registers"] = t.registers;
  if (!t.adjuncts.empty()) j["adjuncts"] = t.adjuncts;
  return j;
}

NounEntry nounFromJson(const json& j) {
  expectObject(j, "noun");
  NounEntry n;
  n.sense = get<std::string>(j, "sense");
  n.language = get<std::string>(j, "language");
  n.lemma = get<std::string>(j, "lemma");
  n.gender = get<std::string>(j, "gender");
  n.paradigm = getOr<std::string>(j, "class", "");
  n.registers = getOr(j, "registers", std::vector<std::string>{});
  n.forms = getOr(j, "forms", FormTable{});
  if (n.paradigm.empty() && n.forms.empty()) parseFail("noun '" + n.lemma + "' needs a class or explicit forms");
  return n;
}

json nounToJson(const NounEntry& n) {
  json j{{"sense", n.sense}, {"language", n.language}, {"lemma", n.lemma}, {"gender", n.gender}};
  if (!n.paradigm.empty()) j["class"] = n.paradigm;
  if (!n.registers.empty()) j["registers"] = n.registers;
  if (!n.forms.empty()) j["forms"] = n.forms;
  return j;
}

VerbEntry verbFromJson(const json& j) {
  expectObject(j, "verb");
  VerbEntry v;
  v.sense = get<std::string>(j, "sense");
  v.language = get<std::string>(j, "language");
  v.lemma = get<std::string>(j, "lemma");
  v.paradigm = getOr<std::string>(j, "class", "");
  v.registers = getOr(j, "registers", std::vector<std::string>{});
  v.forms = getOr(j, "forms", FormTable{});
  if (v.paradigm.empty() && v.forms.empty()) parseFail("verb '" + v.lemma + "' needs a class or explicit forms");
  return v;
}

json verbToJson(const VerbEntry& v) {
  json j{{"sense", v.sense}, {"language", v.language}, {"lemma", v.lemma}};
  if (!v.paradigm.empty()) j["class"] = v.paradigm;
  if (!v.registers.empty()) j["registers"] = v.registers;
  if (!v.forms.empty()) j["forms"] = v.forms;
  return j;
}

AdjectiveEntry adjectiveFromJson(const json& j) {
  expectObject(j, "adjective");
  AdjectiveEntry a;
  a.sense = get<std::string>(j, "sense");
  a.language = get<std::string>(j, "language");
  a.lemma = get<std::string>(j, "lemma");
  a.paradigm = getOr<std::string>(j, "class", "");
  a.forms = getOr(j, "forms", FormTable{});
  if (a.paradigm.empty() && a.forms.empty()) parseFail("adjective '" + a.lemma + "' needs a class or explicit forms");
  return a;
}

json adjectiveToJson(const AdjectiveEntry& a) {
  json j{{"sense", a.sense}, {"language", a.language}, {"lemma", a.lemma}};
  if (!a.paradigm.empty()) j["class"] = a.paradigm;
  if (!a.forms.empty()) j["forms"] = a.forms;
  return j;
}

json diagnosticsToJson(const Diagnostics& diags) {
  json arr = json::array();
  for (const auto& d : diags)
    arr.push_back({{"severity", to_string(d.severity)}, {"location", d.location}, {"message", d.message}});
  return arr;
}

// ---------------------------------------------------------------- bundle

json bundleToJson(const KnowledgeBase& kb) {
  json doc;
  doc["version"] = kBundleVersion;
  doc["languages"] = kb.languages();

  json types = json::array();
  for (const auto& t : kb.types()) {
    json jt{{"name", t.name}};
    jt["parent"] = t.parent ? json(*t.parent) : json(nullptr);
    json fields = json::array();
    for (const auto& f : t.fields) fields.push_back(fieldToJson(f));
    jt["fields"] = fields;
    types.push_back(jt);
  }
  doc["types"] = types;

  json entities = json::array();
  for (const auto& e : kb.entities()) entities.push_back(entityToJson(e));
  doc["entities"] = entities;

  json facts = json::array();
  for (const auto& f : kb.facts()) facts.push_back(factToJson(f));
  doc["facts"] = facts;

  json canned = json::array();
  for (const auto& c : kb.canned()) canned.push_back(cannedToJson(c));
  doc["canned"] = canned;

  json schemas = json::array();
  for (const auto& s : kb.schemas()) schemas.push_back(schemaToJson(s));
  doc["schemas"] = schemas;

  json users = json::array();
  for (const auto& u : kb.userTypes()) users.push_back(userTypeToJson(u));
  doc["userTypes"] = users;

  json lex;
  lex["nouns"] = json::array();
  for (const auto& n : kb.lexicon().nouns) lex["nouns"].push_back(nounToJson(n));
  lex["verbs"] = json::array();
  for (const auto& v : kb.lexicon().verbs) lex["verbs"].push_back(verbToJson(v));
  lex["adjectives"] = json::array();
  for (const auto& a : kb.lexicon().adjectives) lex["adjectives"].push_back(adjectiveToJson(a));
  lex["typeNouns"] = kb.lexicon().typeNouns;
  doc["lexicon"] = lex;

  json micro = json::array();
  for (const auto& t : kb.templates()) micro.push_back(templateToJson(t));
  doc["microplans"] = micro;
  return doc;
}

KnowledgeBase bundleFromJson(const json& doc) {
  expectObject(doc, "bundle");
  auto version = get<std::string>(doc, "version");
  if (version != kBundleVersion)
    throw Error(ErrorCode::SchemaVersionMismatch,
                "bundle version '" + version + "' is not '" + std::string(kBundleVersion) + "'");
  try {
    KnowledgeBase kb;
    kb.setLanguages(get<std::vector<std::string>>(doc, "languages"));
    for (const auto& jt : need(doc, "types")) {
      EntityTypeDef t;
      t.name = get<std::string>(jt, "name");
      if (auto p = jt.find("parent"); p != jt.end() && !p->is_null()) t.parent = p->get<std::string>();
      for (const auto& jf : jt.value("fields", json::array())) t.fields.push_back(fieldFromJson(jf));
      kb.loadType(std::move(t));
    }
    for (const auto& je : need(doc, "entities")) kb.loadEntity(entityFromJson(je));
    for (const auto& jf : need(doc, "facts")) kb.loadFact(factFromJson(jf));
    for (const auto& jc : need(doc, "canned")) kb.loadCanned(cannedFromJson(jc));
    for (const auto& js : need(doc, "schemas")) {
      auto s = schemaFromJson(js);
      if (kb.findType(s.entityType)) kb.setSchema(s);
      else parseFail("schema for unknown type '" + s.entityType + "'");
    }
    for (const auto& ju : need(doc, "userTypes")) {
      auto u = userTypeFromJson(ju);
      try {
        kb.setUserType(u);
      } catch (const Error& e) {
        parseFail(std::string("user type: ") + e.what());
      }
    }
    const auto& lex = need(doc, "lexicon");
    expectObject(lex, "lexicon");
    for (const auto& n : lex.value("nouns", json::array())) kb.lexicon().nouns.push_back(nounFromJson(n));
    for (const auto& v : lex.value("verbs", json::array())) kb.lexicon().verbs.push_back(verbFromJson(v));
    for (const auto& a : lex.value("adjectives", json::array()))
      kb.lexicon().adjectives.push_back(adjectiveFromJson(a));
    kb.lexicon().typeNouns = getOr(lex, "typeNouns", std::map<std::string, std::vector<std::string>>{});
    for (const auto& jt : doc.value("microplans", json::array())) kb.addTemplate(templateFromJson(jt));
    return kb;
  } catch (const json::exception& e) {
    parseFail(e.what());
  }
}

KnowledgeBase parseBundle(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    if (offset > text.size()) offset = text.size();
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    parseFail("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
  return bundleFromJson(doc);
}

KnowledgeBase loadBundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parseFail("cannot open bundle " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parseBundle(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string dumpBundle(const KnowledgeBase& kb) { return bundleToJson(kb).dump(2) + "\n"; }

void saveBundle(const KnowledgeBase& kb, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + tmp.string());
    out << dumpBundle(kb);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace scribe
