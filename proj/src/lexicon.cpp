#include "scribe/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scribe/kb.hpp"

namespace scribe {

using nlohmann::json;

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

bool endsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool contains(const std::vector<std::string>& values, std::string_view v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

const std::string& orFirst(const std::string& value, const std::vector<std::string>& values,
                           std::string_view what) {
  if (value.empty()) {
    if (values.empty()) fail(ErrorCode::FeatureOutOfGrid, "pack declares no " + std::string(what));
    return values.front();
  }
  if (!contains(values, value))
    fail(ErrorCode::FeatureOutOfGrid, std::string(what) + " '" + value + "' is outside the pack's grid");
  return value;
}

}  // namespace

std::string_view to_string(WordClass cls) {
  switch (cls) {
    case WordClass::Noun: return "noun";
    case WordClass::Verb: return "verb";
    case WordClass::Adjective: return "adjective";
  }
  return "noun";
}

// ---------------------------------------------------------------- cells

std::string LanguagePack::nounCell(std::string_view number, std::string_view kase) const {
  std::string cell(number);
  if (features.cases.size() > 1) cell += "." + std::string(kase);
  return cell;
}

std::string LanguagePack::agreementCell(std::string_view gender, std::string_view number,
                                        std::string_view kase) const {
  std::string cell = std::string(gender) + "." + std::string(number);
  if (features.cases.size() > 1) cell += "." + std::string(kase);
  return cell;
}

std::string LanguagePack::verbCell(std::string_view tense, std::string_view person,
                                   std::string_view number) const {
  return std::string(tense) + "." + std::string(person) + std::string(number);
}

std::string LanguagePack::participleCell(std::string_view gender, std::string_view number) const {
  if (!features.participleAgreement) return "participle";
  return "participle." + std::string(gender) + "." + std::string(number);
}

std::string LanguagePack::pronounCell(std::string_view gender, std::string_view number,
                                      std::string_view kase) const {
  return std::string(gender) + "." + std::string(number) + "." + std::string(kase);
}

std::vector<std::string> LanguagePack::grid(WordClass cls) const {
  std::vector<std::string> cells;
  const auto& f = features;
  switch (cls) {
    case WordClass::Noun:
      for (const auto& n : f.numbers)
        for (const auto& c : f.cases) cells.push_back(nounCell(n, c));
      break;
    case WordClass::Adjective:
      for (const auto& g : f.genders)
        for (const auto& n : f.numbers)
          for (const auto& c : f.cases) cells.push_back(agreementCell(g, n, c));
      break;
    case WordClass::Verb:
      for (const auto& t : f.tenses)
        for (const auto& n : f.numbers)
          for (const auto& p : f.persons) cells.push_back(verbCell(t, p, n));
      if (f.participleAgreement) {
        for (const auto& g : f.genders)
          for (const auto& n : f.numbers) cells.push_back(participleCell(g, n));
      } else {
        cells.push_back("participle");
      }
      break;
  }
  return cells;
}

const Paradigm* LanguagePack::findParadigm(std::string_view classId, WordClass* cls) const {
  const std::string key(classId);
  if (auto it = nounParadigms.find(key); it != nounParadigms.end()) {
    if (cls) *cls = WordClass::Noun;
    return &it->second;
  }
  if (auto it = verbParadigms.find(key); it != verbParadigms.end()) {
    if (cls) *cls = WordClass::Verb;
    return &it->second;
  }
  if (auto it = adjectiveParadigms.find(key); it != adjectiveParadigms.end()) {
    if (cls) *cls = WordClass::Adjective;
    return &it->second;
  }
  return nullptr;
}

const std::string& LanguagePack::functionWord(const FormTable& table, const std::string& cell,
                                              std::string_view what) const {
  auto it = table.find(cell);
  if (it == table.end())
    fail(ErrorCode::FeatureOutOfGrid,
         code + ": no " + std::string(what) + " form for cell '" + cell + "'");
  return it->second;
}

// ---------------------------------------------------------------- pack set

void PackSet::add(LanguagePack pack) {
  std::string code = pack.code;
  packs_.insert_or_assign(std::move(code), std::move(pack));
}

bool PackSet::contains(std::string_view code) const { return packs_.find(code) != packs_.end(); }

const LanguagePack& PackSet::get(std::string_view code) const {
  auto it = packs_.find(code);
  if (it == packs_.end())
    fail(ErrorCode::UnknownLanguage, "no language pack loaded for '" + std::string(code) + "'");
  return it->second;
}

std::vector<std::string> PackSet::codes() const {
  std::vector<std::string> out;
  for (const auto& [code, pack] : packs_) out.push_back(code);
  return out;
}

// ---------------------------------------------------------------- lexicon

const NounEntry* Lexicon::noun(std::string_view sense, std::string_view language) const {
  for (const auto& n : nouns)
    if (n.sense == sense && n.language == language) return &n;
  return nullptr;
}

const VerbEntry* Lexicon::verb(std::string_view sense, std::string_view language) const {
  for (const auto& v : verbs)
    if (v.sense == sense && v.language == language) return &v;
  return nullptr;
}

const AdjectiveEntry* Lexicon::adjective(std::string_view sense, std::string_view language) const {
  for (const auto& a : adjectives)
    if (a.sense == sense && a.language == language) return &a;
  return nullptr;
}

bool registerMatches(const std::vector<std::string>& tags, std::string_view reg) {
  return tags.empty() || reg.empty() || contains(tags, reg);
}

// ---------------------------------------------------------------- morphology

FormTable generateForms(std::string_view lemma, std::string_view paradigmClass,
                        const LanguagePack& pack) {
  WordClass cls{};
  const Paradigm* paradigm = pack.findParadigm(paradigmClass, &cls);
  if (!paradigm)
    fail(ErrorCode::UnknownParadigmClass,
         pack.code + ": unknown paradigm class '" + std::string(paradigmClass) + "'");
  if (!endsWith(lemma, paradigm->strip) || lemma.size() == paradigm->strip.size())
    fail(ErrorCode::LemmaDoesNotMatchClassPattern,
         "lemma '" + std::string(lemma) + "' does not end in '" + paradigm->strip +
             "' required by class '" + std::string(paradigmClass) + "'");
  std::string stem(lemma.substr(0, lemma.size() - paradigm->strip.size()));

  FormTable forms;
  for (const auto& cell : pack.grid(cls)) {
    auto it = paradigm->suffixes.find(cell);
    if (it == paradigm->suffixes.end())
      fail(ErrorCode::FeatureOutOfGrid,
           "class '" + std::string(paradigmClass) + "' has no rule for cell '" + cell + "'");
    forms[cell] = stem + it->second;
  }

  const auto& irregular = cls == WordClass::Noun ? pack.irregularNouns
                          : cls == WordClass::Verb ? pack.irregularVerbs
                                                   : pack.irregularAdjectives;
  if (auto it = irregular.find(std::string(lemma)); it != irregular.end())
    for (const auto& [cell, form] : it->second)
      if (forms.count(cell)) forms[cell] = form;
  return forms;
}

namespace {

template <typename Entry>
FormTable explicitOrGenerated(const Entry& entry, const LanguagePack& pack, WordClass cls) {
  if (!entry.forms.empty()) {
    for (const auto& cell : pack.grid(cls))
      if (!entry.forms.count(cell))
        fail(ErrorCode::FeatureOutOfGrid, "explicit forms of '" + entry.lemma +
                                              "' do not cover cell '" + cell + "'");
    return entry.forms;
  }
  return generateForms(entry.lemma, entry.paradigm, pack);
}

template <typename Entry>
std::string formFor(const Entry& entry, const std::string& cell, const LanguagePack& pack,
                    WordClass cls) {
  // Explicit forms never consult the paradigm rules.
  if (!entry.forms.empty()) {
    auto it = entry.forms.find(cell);
    if (it == entry.forms.end())
      fail(ErrorCode::FeatureOutOfGrid, "'" + entry.lemma + "' has no form for cell '" + cell + "'");
    return it->second;
  }
  auto forms = generateForms(entry.lemma, entry.paradigm, pack);
  (void)cls;
  auto it = forms.find(cell);
  if (it == forms.end())
    fail(ErrorCode::FeatureOutOfGrid, "cell '" + cell + "' is outside the pack's grid");
  return it->second;
}

}  // namespace

FormTable formsOf(const NounEntry& entry, const LanguagePack& pack) {
  return explicitOrGenerated(entry, pack, WordClass::Noun);
}
FormTable formsOf(const VerbEntry& entry, const LanguagePack& pack) {
  return explicitOrGenerated(entry, pack, WordClass::Verb);
}
FormTable formsOf(const AdjectiveEntry& entry, const LanguagePack& pack) {
  return explicitOrGenerated(entry, pack, WordClass::Adjective);
}

std::string inflect(const NounEntry& entry, const Features& features, const LanguagePack& pack) {
  const auto& f = pack.features;
  const auto& number = orFirst(features.number, f.numbers, "number");
  const auto& kase = orFirst(features.kase, f.cases, "case");
  return formFor(entry, pack.nounCell(number, kase), pack, WordClass::Noun);
}

std::string inflect(const AdjectiveEntry& entry, const Features& features,
                    const LanguagePack& pack) {
  const auto& f = pack.features;
  const auto& gender = orFirst(features.gender, f.genders, "gender");
  const auto& number = orFirst(features.number, f.numbers, "number");
  const auto& kase = orFirst(features.kase, f.cases, "case");
  return formFor(entry, pack.agreementCell(gender, number, kase), pack, WordClass::Adjective);
}

std::string inflect(const VerbEntry& entry, const Features& features, const LanguagePack& pack) {
  const auto& f = pack.features;
  const auto& tense = orFirst(features.tense, f.tenses, "tense");
  const auto& person = orFirst(features.person, f.persons, "person");
  const auto& number = orFirst(features.number, f.numbers, "number");
  if (features.voice.empty() || features.voice == "active")
    return formFor(entry, pack.verbCell(tense, person, number), pack, WordClass::Verb);
  if (features.voice != "passive")
    fail(ErrorCode::FeatureOutOfGrid, "voice '" + features.voice + "' is outside the pack's grid");
  const auto& gender = orFirst(features.gender, f.genders, "gender");
  const auto& aux = pack.functionWord(pack.functionWords.passiveAuxiliary,
                                      pack.verbCell(tense, person, number), "passive auxiliary");
  auto participle = formFor(entry, pack.participleCell(gender, number), pack, WordClass::Verb);
  return aux + " " + participle;
}

// ---------------------------------------------------------------- lookup

const NounEntry& nounForType(std::string_view typeName, std::string_view language,
                             std::string_view reg, const KnowledgeBase& kb) {
  const auto& lex = kb.lexicon();
  for (const auto& name : kb.ancestry(typeName)) {
    auto it = lex.typeNouns.find(name);
    if (it == lex.typeNouns.end()) continue;
    for (const auto& sense : it->second)
      if (const auto* n = lex.noun(sense, language); n && registerMatches(n->registers, reg))
        return *n;
  }
  fail(ErrorCode::NoAlignedNoun, "no noun for type '" + std::string(typeName) + "' in language '" +
                                     std::string(language) + "'");
}

// ---------------------------------------------------------------- alignment

std::vector<SenseAlignment> senseAlignment(const Lexicon& lexicon) {
  std::vector<SenseAlignment> out;
  auto record = [&](const std::string& sense, WordClass cls, const std::string& lang) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SenseAlignment& a) {
      return a.sense == sense && a.wordClass == cls;
    });
    if (it == out.end()) {
      out.push_back(SenseAlignment{sense, cls, {}});
      it = out.end() - 1;
    }
    it->presence[lang] = true;
  };
  for (const auto& n : lexicon.nouns) record(n.sense, WordClass::Noun, n.language);
  for (const auto& v : lexicon.verbs) record(v.sense, WordClass::Verb, v.language);
  for (const auto& a : lexicon.adjectives) record(a.sense, WordClass::Adjective, a.language);
  return out;
}

Diagnostics checkAlignment(const Lexicon& lexicon, const std::vector<std::string>& enabledLanguages) {
  Diagnostics diags;
  for (const auto& a : senseAlignment(lexicon))
    for (const auto& lang : enabledLanguages)
      if (!a.presence.count(lang))
        diags.push_back({Severity::Warning,
                         "lexicon/" + std::string(to_string(a.wordClass)) + "s/" + a.sense,
                         "sense '" + a.sense + "' has no entry in language '" + lang + "'"});
  return diags;
}

Diagnostics checkLexiconAgainstPacks(const Lexicon& lexicon, const PackSet& packs) {
  Diagnostics diags;
  auto check = [&](const auto& entry, WordClass cls, std::string_view kind) {
    std::string loc = "lexicon/" + std::string(kind) + "/" + entry.sense + "/" + entry.language;
    if (!packs.contains(entry.language)) {
      diags.push_back({Severity::Error, loc, "no language pack for '" + entry.language + "'"});
      return;
    }
    const auto& pack = packs.get(entry.language);
    try {
      if (entry.forms.empty()) {
        WordClass found{};
        if (!pack.findParadigm(entry.paradigm, &found))
          throw Error(ErrorCode::UnknownParadigmClass, "unknown paradigm class '" + entry.paradigm + "'");
        if (found != cls)
          throw Error(ErrorCode::UnknownParadigmClass,
                      "paradigm class '" + entry.paradigm + "' is not a " + std::string(kind) + " class");
      }
      (void)formsOf(entry, pack);
    } catch (const Error& e) {
      diags.push_back({Severity::Error, loc, e.what()});
    }
  };
  for (const auto& n : lexicon.nouns) {
    check(n, WordClass::Noun, "nouns");
    if (!packs.contains(n.language)) continue;
    const auto& pack = packs.get(n.language);
    if (!contains(pack.features.genders, n.gender)) {
      diags.push_back({Severity::Error, "lexicon/nouns/" + n.sense + "/" + n.language,
                       "gender '" + n.gender + "' is not declared by the pack"});
      continue;
    }
    for (const auto& num : pack.features.numbers)
      for (const auto& c : pack.features.pronounCases)
        if (!pack.functionWords.pronouns.count(pack.pronounCell(n.gender, num, c)))
          diags.push_back({Severity::Error, "packs/" + pack.code + "/pronouns",
                           "no pronoun for " + pack.pronounCell(n.gender, num, c)});
  }
  for (const auto& v : lexicon.verbs) check(v, WordClass::Verb, "verbs");
  for (const auto& a : lexicon.adjectives) check(a, WordClass::Adjective, "adjectives");
  // one diagnostic per missing pronoun cell is enough
  std::sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.location, a.message) < std::tie(b.location, b.message);
  });
  diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
  return diags;
}

// ---------------------------------------------------------------- pack JSON

namespace {

std::map<std::string, Paradigm> parseParadigms(const json& j) {
  std::map<std::string, Paradigm> out;
  if (j.is_null()) return out;
  for (const auto& [id, body] : j.items())
    out[id] = Paradigm{body.value("strip", std::string()),
                       body.at("suffixes").get<FormTable>()};
  return out;
}

template <typename T>
T opt(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->template get<T>();
}

}  // namespace

LanguagePack loadPack(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open language pack " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  try {
    LanguagePack p;
    p.code = j.at("code").get<std::string>();
    p.name = j.value("name", p.code);
    if (auto f = j.find("features"); f != j.end()) {
      auto& fi = p.features;
      fi.numbers = opt(*f, "numbers", fi.numbers);
      fi.cases = opt(*f, "cases", fi.cases);
      fi.genders = opt(*f, "genders", fi.genders);
      fi.persons = opt(*f, "persons", fi.persons);
      fi.tenses = opt(*f, "tenses", fi.tenses);
      fi.pronounCases = opt(*f, "pronounCases", fi.pronounCases);
      fi.roleCases = opt(*f, "roleCases", fi.roleCases);
      fi.participleAgreement = opt(*f, "participleAgreement", false);
    }
    p.nounParadigms = parseParadigms(j.value("nounParadigms", json()));
    p.verbParadigms = parseParadigms(j.value("verbParadigms", json()));
    p.adjectiveParadigms = parseParadigms(j.value("adjectiveParadigms", json()));
    if (auto irr = j.find("irregularForms"); irr != j.end()) {
      p.irregularNouns = opt(*irr, "noun", p.irregularNouns);
      p.irregularVerbs = opt(*irr, "verb", p.irregularVerbs);
      p.irregularAdjectives = opt(*irr, "adjective", p.irregularAdjectives);
    }
    const auto& fw = j.at("functionWords");
    auto& w = p.functionWords;
    w.definiteArticle = opt(fw, "definiteArticle", FormTable{});
    w.indefiniteArticle = opt(fw, "indefiniteArticle", FormTable{});
    w.demonstrative = opt(fw, "demonstrative", FormTable{});
    w.pronouns = opt(fw, "pronouns", FormTable{});
    w.copula = opt(fw, "copula", FormTable{});
    w.passiveAuxiliary = opt(fw, "passiveAuxiliary", FormTable{});
    w.prepositions = opt(fw, "prepositions", std::map<std::string, std::string>{});
    w.conjunction = opt(fw, "conjunction", std::string());
    w.contrastive = opt(fw, "contrastive", std::string());
    w.agentMarker = opt(fw, "agentMarker", std::string());
    w.comparisonTemplate = opt(fw, "comparisonTemplate", std::string());
    w.exhaustedMessage = opt(fw, "exhaustedMessage", std::string());
    w.eraSuffix = opt(fw, "eraSuffix", std::string());
    p.linearization = j.at("linearization").get<std::map<std::string, std::vector<std::string>>>();
    if (auto o = j.find("orthography"); o != j.end()) {
      auto& ort = p.orthography;
      ort.capitalizeFirst = opt(*o, "capitalizeFirst", ort.capitalizeFirst);
      ort.terminal = opt(*o, "terminal", ort.terminal);
      ort.noSpaceBefore = opt(*o, "noSpaceBefore", ort.noSpaceBefore);
      ort.beforeVowel = opt(*o, "beforeVowel", ort.beforeVowel);
      ort.contractions = opt(*o, "contractions", ort.contractions);
      ort.proDrop = opt(*o, "proDrop", ort.proDrop);
      ort.adjectiveAfterNoun = opt(*o, "adjectivePosition", std::string("pre")) == "post";
    }
    std::set<std::string> ids;
    for (const auto* m : {&p.nounParadigms, &p.verbParadigms, &p.adjectiveParadigms})
      for (const auto& [id, para] : *m)
        if (!ids.insert(id).second)
          fail(ErrorCode::ParseError, path.string() + ": paradigm class '" + id + "' declared twice");
    return p;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

PackSet loadPacks(const std::filesystem::path& dir, const std::vector<std::string>& codes) {
  PackSet set;
  for (const auto& code : codes) {
    auto path = dir / (code + ".json");
    if (!std::filesystem::exists(path))
      fail(ErrorCode::UnknownLanguage, "no language pack file " + path.string());
    set.add(loadPack(path));
  }
  return set;
}

}  // namespace scribe
