#include "scribe/realizer.hpp"

#include <algorithm>
#include <sstream>

#include "scribe/text.hpp"

namespace scribe {

namespace {

struct Word {
  std::string text;
  int mention = -1;
};

using Words = std::vector<Word>;

struct NpInfo {
  std::string gender;
  std::string number = "sg";
  std::string person = "3";
};

std::vector<std::string> splitSpaces(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool endsWithTerminal(std::string_view s) {
  for (std::string_view t : {".", "!", "?", "…"})
    if (s.size() >= t.size() && s.substr(s.size() - t.size()) == t) return true;
  return false;
}

class SentenceBuilder {
 public:
  SentenceBuilder(const SentenceSpec& spec, const LanguagePack& pack, const KnowledgeBase& kb,
                  std::string_view reg)
      : spec_(spec), pack_(pack), kb_(kb), reg_(reg) {}

  RealizedSentence build() {
    RealizedSentence out;
    if (spec_.clauses.empty()) return out;
    const auto& first = spec_.clauses.front();
    if (first.kind == ClauseKind::Absorbed) return out;
    if (first.kind == ClauseKind::Canned) {
      auto t = text::toNfc(first.cannedText);
      auto b = t.find_first_not_of(" \t\n");
      if (b == std::string::npos) return out;
      t = t.substr(b, t.find_last_not_of(" \t\n") - b + 1);
      if (!endsWithTerminal(t)) t += pack_.orthography.terminal;
      out.text = std::move(t);
      return out;
    }

    Words words;
    if (spec_.relation == Relation::Contrast) append(words, literal(pack_.functionWords.contrastive));
    if (first.kind == ClauseKind::Comparison) {
      append(words, comparison(first));
    } else {
      std::optional<NpInfo> shared;
      for (std::size_t i = 0; i < spec_.clauses.size(); ++i) {
        if (i > 0) {
          if (i + 1 == spec_.clauses.size()) append(words, literal(pack_.functionWords.conjunction));
          else words.push_back({",", -1});
        }
        append(words, clause(spec_.clauses[i], spec_.elided[i], shared));
      }
    }
    finish(words, out);
    return out;
  }

 private:
  static void append(Words& into, Words more) {
    for (auto& w : more) into.push_back(std::move(w));
  }

  Words literal(std::string_view s, int mention = -1) const {
    Words out;
    for (auto& w : splitSpaces(s)) out.push_back({text::toNfc(w), mention});
    return out;
  }

  int mention(const std::string& entityId) {
    mentions_.push_back(entityId);
    return static_cast<int>(mentions_.size()) - 1;
  }

  std::string caseFor(Role role) const {
    const auto& f = pack_.features;
    if (auto it = f.roleCases.find(std::string(to_string(role))); it != f.roleCases.end()) return it->second;
    return f.cases.empty() ? std::string() : f.cases.front();
  }

  NpMode modeOf(const std::string& entityId) const {
    auto it = spec_.npModes.find(entityId);
    return it == spec_.npModes.end() ? NpMode::Unset : it->second;
  }

  // determiner + noun (+ modifier), agreeing with the noun's gender
  Words nounPhrase(const std::string& typeName, const FormTable& determiners, const std::string& kase,
                   const std::string& modifier, int m, NpInfo& info) const {
    const auto& noun = nounForType(typeName, pack_.code, reg_, kb_);
    info.gender = noun.gender;
    Features f;
    f.number = info.number;
    f.kase = kase;
    f.gender = noun.gender;
    Words out;
    const auto& det = pack_.functionWord(determiners, pack_.agreementCell(noun.gender, info.number, kase),
                                         "determiner");
    if (!det.empty()) append(out, literal(det, m));
    Words head = literal(inflect(noun, f, pack_), m);
    if (!modifier.empty()) {
      const auto* adj = kb_.lexicon().adjective(modifier, pack_.code);
      if (!adj)
        throw Error(ErrorCode::UnknownSense,
                    "adjective sense '" + modifier + "' has no entry in '" + pack_.code + "'");
      Words mod = literal(inflect(*adj, f, pack_), m);
      if (pack_.orthography.adjectiveAfterNoun) {
        append(out, std::move(head));
        append(out, std::move(mod));
      } else {
        append(out, std::move(mod));
        append(out, std::move(head));
      }
    } else {
      append(out, std::move(head));
    }
    return out;
  }

  Words entityNp(const ReferTarget& target, Role role, NpInfo& info, const std::string& typeOverride = {},
                 NpMode forced = NpMode::Unset) {
    if (!target.isEntity()) {
      std::string value = target.literal ? valueText(*target.literal, pack_.code, kb_, pack_.functionWords.eraSuffix)
                                         : std::string();
      return literal(value);
    }
    const auto& e = kb_.entity(target.entityId);
    auto nameIt = e.names.find(pack_.code);
    bool named = nameIt != e.names.end();
    NpMode mode = forced != NpMode::Unset ? forced : modeOf(e.id);
    if (mode == NpMode::Unset || (mode == NpMode::Name && !named)) mode = named ? NpMode::Name : NpMode::Definite;
    if (!typeOverride.empty()) mode = NpMode::Demonstrative;

    const auto kase = caseFor(role);
    switch (mode) {
      case NpMode::Name: {
        info.gender = referentAgreement(kb_, e, pack_.code, reg_).gender;
        return literal(nameIt->second.text, mention(e.id));
      }
      case NpMode::Pronoun: {
        auto a = referentAgreement(kb_, e, pack_.code, reg_);
        info.gender = a.gender;
        info.number = a.number;
        if (role == Role::Subject && pack_.orthography.proDrop) return {};
        const auto& cases = pack_.features.pronounCases;
        std::string pcase = cases.empty() ? kase
                            : role == Role::Subject || cases.size() == 1 ? cases.front()
                                                                         : cases[1];
        const auto& word = pack_.functionWord(pack_.functionWords.pronouns,
                                              pack_.pronounCell(a.gender, a.number, pcase), "pronoun");
        return literal(word, mention(e.id));
      }
      case NpMode::Demonstrative:
      case NpMode::Definite:
      case NpMode::Indefinite:
      case NpMode::Unset: {
        const auto& table = mode == NpMode::Demonstrative ? pack_.functionWords.demonstrative
                            : mode == NpMode::Indefinite  ? pack_.functionWords.indefiniteArticle
                                                          : pack_.functionWords.definiteArticle;
        return nounPhrase(typeOverride.empty() ? e.typeName : typeOverride, table, kase, e.modifier,
                          mention(e.id), info);
      }
    }
    return {};
  }

  Words verbGroup(const ClauseSpec& c, const NpInfo& subj, const std::string& subjectId) {
    ClauseTrace trace;
    trace.language = pack_.code;
    trace.tense = std::string(to_string(c.tense));
    trace.subjectEntity = subjectId;
    trace.person = subj.person;
    trace.number = subj.number;
    trace.gender = subj.gender;
    if (c.kind == ClauseKind::Copular) {
      trace.voice = "copular";
      trace.verbForm = pack_.functionWord(pack_.functionWords.copula,
                                          pack_.verbCell(trace.tense, subj.person, subj.number), "copula");
    } else {
      trace.voice = std::string(to_string(c.voice));
      trace.verb = c.verb;
      const auto* entry = kb_.lexicon().verb(c.verb, pack_.code);
      if (!entry)
        throw Error(ErrorCode::UnknownSense,
                    "verb sense '" + c.verb + "' has no entry in '" + pack_.code + "'");
      Features f;
      f.tense = trace.tense;
      f.voice = trace.voice;
      f.person = subj.person;  // agreement, never c.requestedPerson
      f.number = subj.number;
      f.gender = subj.gender;
      trace.verbForm = inflect(*entry, f, pack_);
    }
    traces_.push_back(trace);
    return literal(trace.verbForm);
  }

  Words clause(const ClauseSpec& c, bool elided, std::optional<NpInfo>& shared) {
    const std::string key =
        c.kind == ClauseKind::Copular ? "copular.declarative" : std::string(to_string(c.voice)) + ".declarative";
    auto pit = pack_.linearization.find(key);
    if (pit == pack_.linearization.end())
      throw Error(ErrorCode::FeatureOutOfGrid, pack_.code + ": no linearization for '" + key + "'");

    std::map<std::string, Words> parts;
    NpInfo subj;
    std::string subjectId;
    if (const auto* s = c.subject()) {
      subjectId = s->entityId;
      if (elided && shared) {
        subj = *shared;
      } else {
        parts["subject"] = entityNp(*s, Role::Subject, subj, c.subjectType);
      }
    }
    if (!shared) shared = subj;
    parts["verb"] = verbGroup(c, subj, subjectId);

    for (const auto& [role, target] : c.roles) {
      if (role == Role::Subject) continue;
      NpInfo info;
      Words np = entityNp(target, role, info);
      Words part;
      if (role == Role::Agent) {
        part = literal(pack_.functionWords.agentMarker);
      } else if (role == Role::Oblique) {
        auto it = pack_.functionWords.prepositions.find(c.preposition);
        if (it == pack_.functionWords.prepositions.end())
          throw Error(ErrorCode::FeatureOutOfGrid,
                      pack_.code + ": no preposition for sense '" + c.preposition + "'");
        part = literal(it->second);
      }
      append(part, std::move(np));
      parts[std::string(to_string(role))] = std::move(part);
    }

    if (!c.adjuncts.empty()) {
      Words adj;
      std::string value =
          c.value ? valueText(*c.value, pack_.code, kb_, pack_.functionWords.eraSuffix) : std::string();
      for (auto token : c.adjuncts) {
        for (auto pos = token.find("{value}"); pos != std::string::npos; pos = token.find("{value}", pos + value.size()))
          token.replace(pos, 7, value);
        append(adj, literal(token));
      }
      parts["adjuncts"] = std::move(adj);
    }

    if (c.kind == ClauseKind::Copular) {
      NpInfo info;
      parts["complement"] = nounPhrase(c.complementType, pack_.functionWords.indefiniteArticle,
                                       caseFor(Role::None), "", -1, info);
    }

    Words out;
    for (const auto& name : pit->second)
      if (auto it = parts.find(name); it != parts.end()) append(out, std::move(it->second));
    return out;
  }

  Words comparison(const ClauseSpec& c) {
    const auto& tmpl = pack_.functionWords.comparisonTemplate;
    if (tmpl.empty() || c.inner.empty())
      throw Error(ErrorCode::FeatureOutOfGrid, pack_.code + ": no comparison template");
    Words out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
      auto open = tmpl.find('{', pos);
      append(out, literal(tmpl.substr(pos, open == std::string::npos ? std::string::npos : open - pos)));
      if (open == std::string::npos) break;
      auto close = tmpl.find('}', open);
      if (close == std::string::npos)
        throw Error(ErrorCode::FeatureOutOfGrid, pack_.code + ": malformed comparison template");
      auto slot = tmpl.substr(open + 1, close - open - 1);
      NpInfo info;
      if (slot == "prev-np") {
        append(out, entityNp(ReferTarget{c.previousEntity, std::nullopt}, Role::None, info));
      } else if (slot == "prev-noun") {
        const auto& e = kb_.entity(c.previousEntity);
        const auto& noun = nounForType(e.typeName, pack_.code, reg_, kb_);
        append(out, literal(inflect(noun, Features{}, pack_), mention(e.id)));
      } else if (slot == "clause") {
        std::optional<NpInfo> shared;
        append(out, clause(c.inner.front(), false, shared));
      } else {
        throw Error(ErrorCode::FeatureOutOfGrid, pack_.code + ": unknown comparison slot '" + slot + "'");
      }
      pos = close + 1;
    }
    return out;
  }

  void finish(Words& words, RealizedSentence& out) {
    std::erase_if(words, [](const Word& w) { return w.text.empty(); });
    const auto& ortho = pack_.orthography;
    // fused forms take the mention of the noun phrase they open
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      auto it = ortho.contractions.find(words[i].text + " " + words[i + 1].text);
      if (it == ortho.contractions.end()) continue;
      if (words[i].mention != -1 && words[i].mention != words[i + 1].mention) continue;
      words[i].text = it->second;
      words[i].mention = words[i + 1].mention;
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      auto it = ortho.beforeVowel.find(words[i].text);
      if (it != ortho.beforeVowel.end() && text::startsWithVowel(words[i + 1].text)) words[i].text = it->second;
    }
    if (ortho.capitalizeFirst && !words.empty()) words[0].text = text::capitalizeFirst(words[0].text);

    std::map<int, MentionSpan> spans;
    std::size_t cp = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      bool tight = std::find(ortho.noSpaceBefore.begin(), ortho.noSpaceBefore.end(), w.text) !=
                   ortho.noSpaceBefore.end();
      if (i > 0 && !tight) {
        out.text += ' ';
        ++cp;
      }
      std::size_t start = cp;
      out.text += w.text;
      cp += text::codePoints(w.text);
      if (w.mention >= 0) {
        auto [it, fresh] = spans.try_emplace(w.mention, MentionSpan{start, cp, mentions_[static_cast<std::size_t>(w.mention)]});
        if (!fresh) it->second.end = cp;
      }
    }
    if (!endsWithTerminal(out.text)) out.text += ortho.terminal;
    for (auto& [m, span] : spans) out.mentions.push_back(span);
    std::sort(out.mentions.begin(), out.mentions.end(),
              [](const MentionSpan& a, const MentionSpan& b) { return a.start < b.start; });
    out.traces = std::move(traces_);
  }

  const SentenceSpec& spec_;
  const LanguagePack& pack_;
  const KnowledgeBase& kb_;
  std::string reg_;
  std::vector<std::string> mentions_;
  std::vector<ClauseTrace> traces_;
};

}  // namespace

RealizedSentence realizeSentence(const SentenceSpec& spec, const LanguagePack& pack,
                                 const KnowledgeBase& kb, std::string_view reg) {
  return SentenceBuilder(spec, pack, kb, reg).build();
}

AnnotatedText realizeDocument(const DocumentPlan& plan, const std::vector<SentenceSpec>& specs,
                              const LanguagePack& pack, const KnowledgeBase& kb, std::string_view reg,
                              std::vector<ClauseTrace>* traces) {
  AnnotatedText out;
  std::size_t cp = 0;
  for (const auto& spec : specs) {
    auto s = realizeSentence(spec, pack, kb, reg);
    if (traces) traces->insert(traces->end(), s.traces.begin(), s.traces.end());
    if (s.text.empty()) continue;
    if (!out.text.empty()) {
      out.text += ' ';
      ++cp;
    }
    std::size_t start = cp;
    out.text += s.text;
    cp += text::codePoints(s.text);
    out.sentences.push_back({start, cp});
    for (auto m : s.mentions) {
      m.start += start;
      m.end += start;
      out.mentions.push_back(std::move(m));
    }
  }
  for (const auto& node : plan.nodes) {
    if (node.kind == NodeKind::Comparison) continue;
    if (std::find(out.factsExpressed.begin(), out.factsExpressed.end(), node.payload) == out.factsExpressed.end())
      out.factsExpressed.push_back(node.payload);
  }
  return out;
}

std::string previewPhrase(const std::string& field, const std::string& language,
                          const KnowledgeBase& kb, const PackSet& packs) {
  std::vector<const Fact*> facts;
  for (const auto& f : kb.facts())
    if (f.field == field) facts.push_back(&f);
  if (facts.empty()) throw Error(ErrorCode::NoFactForField, "no fact fills field '" + field + "'");
  std::sort(facts.begin(), facts.end(), [](const Fact* a, const Fact* b) {
    return std::tie(a->owner, a->id) < std::tie(b->owner, b->id);
  });
  const Fact& fact = *facts.front();
  const auto& pack = packs.get(language);

  const auto* owner = kb.fieldOwner(field);
  std::optional<FieldDef> def = owner ? kb.findField(owner->name, field) : std::nullopt;
  if (def && def->cannedText) {
    PlanNode node{NodeKind::Fact, fact.id, field, Relation::First, std::nullopt};
    SentenceSpec s;
    s.clauses.push_back(renderCannedNode(node, language, kb));
    s.elided.push_back(false);
    return realizeSentence(s, pack, kb).text;
  }

  auto templates = kb.templatesFor(field, language);
  if (templates.empty())
    throw Error(ErrorCode::NoTemplateForField,
                "no clause template for field '" + field + "' in language '" + language + "'");
  SentenceSpec s;
  s.clauses.push_back(clauseFromTemplate(*templates.front(), fact, fact.owner));
  s.clauses.back().relation = Relation::First;
  s.elided.push_back(false);
  s.relation = Relation::First;
  s.npModes[fact.owner] = NpMode::Demonstrative;
  for (const auto& [role, target] : s.clauses.back().roles)
    if (target.isEntity() && target.entityId != fact.owner)
      s.npModes[target.entityId] =
          kb.entity(target.entityId).names.count(language) ? NpMode::Name : NpMode::Definite;
  return realizeSentence(s, pack, kb).text;
}

nlohmann::json annotatedToJson(const AnnotatedText& t) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : t.sentences) sentences.push_back({{"start", s.start}, {"end", s.end}});
  nlohmann::json mentions = nlohmann::json::array();
  for (const auto& m : t.mentions)
    mentions.push_back({{"start", m.start}, {"end", m.end}, {"entityId", m.entityId}});
  return {{"text", t.text}, {"sentences", sentences}, {"mentions", mentions}, {"factsExpressed", t.factsExpressed}};
}

}  // namespace scribe
