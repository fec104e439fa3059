#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scribe/error.hpp"

namespace scribe {

class KnowledgeBase;

// cell name -> word form
using FormTable = std::map<std::string, std::string>;
// language code -> text
using LocalizedText = std::map<std::string, std::string>;

enum class WordClass { Noun, Verb, Adjective };

std::string_view to_string(WordClass cls);

// Suffix substitution: the lemma must end in `strip`; the stem is the lemma
// without it, and each cell is stem + suffix.
struct Paradigm {
  std::string strip;
  FormTable suffixes;

  bool operator==(const Paradigm&) const = default;
};

struct FeatureInventory {
  std::vector<std::string> numbers{"sg", "pl"};
  std::vector<std::string> cases{"nom"};
  std::vector<std::string> genders{"m", "f", "n"};
  std::vector<std::string> persons{"1", "2", "3"};
  std::vector<std::string> tenses{"present", "past"};
  std::vector<std::string> pronounCases{"nom", "acc"};
  // Case used for a noun phrase in each clause role; missing roles use the
  // first declared case.
  std::map<std::string, std::string> roleCases;
  bool participleAgreement = false;

  bool operator==(const FeatureInventory&) const = default;
};

struct FunctionWords {
  FormTable definiteArticle;    // agreement cell
  FormTable indefiniteArticle;  // agreement cell
  FormTable demonstrative;      // agreement cell
  FormTable pronouns;           // gender.number.case
  FormTable copula;             // tense.<person><number>
  FormTable passiveAuxiliary;   // tense.<person><number>
  std::map<std::string, std::string> prepositions;  // preposition sense -> word
  std::string conjunction;
  std::string contrastive;
  std::string agentMarker;
  std::string comparisonTemplate;
  std::string exhaustedMessage;
  std::string eraSuffix;  // appended to negative years, e.g. "BC"

  bool operator==(const FunctionWords&) const = default;
};

struct Orthography {
  bool capitalizeFirst = true;
  std::string terminal = ".";
  std::vector<std::string> noSpaceBefore{",", ".", ":", ";", "!", "?"};
  // word -> replacement when the next word starts with a vowel ("a" -> "an")
  std::map<std::string, std::string> beforeVowel;
  // "word1 word2" -> fused form ("in il" -> "nel")
  std::map<std::string, std::string> contractions;
  bool proDrop = false;
  bool adjectiveAfterNoun = false;

  bool operator==(const Orthography&) const = default;
};

struct LanguagePack {
  std::string code;
  std::string name;
  FeatureInventory features;
  std::map<std::string, Paradigm> nounParadigms;
  std::map<std::string, Paradigm> verbParadigms;
  std::map<std::string, Paradigm> adjectiveParadigms;
  // lemma -> partial form table overriding the paradigm
  std::map<std::string, FormTable> irregularNouns;
  std::map<std::string, FormTable> irregularVerbs;
  std::map<std::string, FormTable> irregularAdjectives;
  FunctionWords functionWords;
  // "active.declarative" -> ordered constituent names
  std::map<std::string, std::vector<std::string>> linearization;
  Orthography orthography;

  bool operator==(const LanguagePack&) const = default;

  // Cell naming. Dimensions with a single declared value are dropped from
  // noun and agreement cells, so a one-case pack keys nouns as "sg"/"pl".
  std::string nounCell(std::string_view number, std::string_view kase) const;
  std::string agreementCell(std::string_view gender, std::string_view number,
                            std::string_view kase) const;
  std::string verbCell(std::string_view tense, std::string_view person,
                       std::string_view number) const;
  std::string participleCell(std::string_view gender,
                             std::string_view number) const;
  std::string pronounCell(std::string_view gender, std::string_view number,
                          std::string_view kase) const;

  // Every cell a paradigm of this word class must produce.
  std::vector<std::string> grid(WordClass cls) const;

  // Looks the class id up across all three paradigm maps.
  const Paradigm* findParadigm(std::string_view classId, WordClass* cls = nullptr) const;

  // Throws FeatureOutOfGrid when a function-word cell is missing.
  const std::string& functionWord(const FormTable& table, const std::string& cell,
                                  std::string_view what) const;
};

class PackSet {
 public:
  void add(LanguagePack pack);
  bool contains(std::string_view code) const;
  const LanguagePack& get(std::string_view code) const;  // UnknownLanguage
  std::vector<std::string> codes() const;

 private:
  std::map<std::string, LanguagePack, std::less<>> packs_;
};

struct NounEntry {
  std::string sense;
  std::string language;
  std::string lemma;
  std::string gender;
  std::string paradigm;
  std::vector<std::string> registers;
  FormTable forms;  // explicit table; when non-empty it wins over the paradigm

  bool operator==(const NounEntry&) const = default;
};

struct VerbEntry {
  std::string sense;
  std::string language;
  std::string lemma;
  std::string paradigm;
  std::vector<std::string> registers;
  FormTable forms;

  bool operator==(const VerbEntry&) const = default;
};

struct AdjectiveEntry {
  std::string sense;
  std::string language;
  std::string lemma;
  std::string paradigm;
  FormTable forms;

  bool operator==(const AdjectiveEntry&) const = default;
};

struct SenseAlignment {
  std::string sense;
  WordClass wordClass = WordClass::Noun;
  std::map<std::string, bool> presence;  // language -> has entry

  bool operator==(const SenseAlignment&) const = default;
};

struct Lexicon {
  std::vector<NounEntry> nouns;
  std::vector<VerbEntry> verbs;
  std::vector<AdjectiveEntry> adjectives;
  // entity type -> noun senses, in attachment order
  std::map<std::string, std::vector<std::string>> typeNouns;

  bool operator==(const Lexicon&) const = default;

  const NounEntry* noun(std::string_view sense, std::string_view language) const;
  const VerbEntry* verb(std::string_view sense, std::string_view language) const;
  const AdjectiveEntry* adjective(std::string_view sense,
                                  std::string_view language) const;
};

// Grammatical features requested from `inflect`. Empty strings fall back to
// the first value the pack declares for that dimension.
struct Features {
  std::string tense;
  std::string voice = "active";
  std::string person = "3";
  std::string number = "sg";
  std::string gender;
  std::string kase;
};

// An entry with no register tags matches every register.
bool registerMatches(const std::vector<std::string>& tags, std::string_view reg);

FormTable generateForms(std::string_view lemma, std::string_view paradigmClass,
                        const LanguagePack& pack);

FormTable formsOf(const NounEntry& entry, const LanguagePack& pack);
FormTable formsOf(const VerbEntry& entry, const LanguagePack& pack);
FormTable formsOf(const AdjectiveEntry& entry, const LanguagePack& pack);

std::string inflect(const NounEntry& entry, const Features& features,
                    const LanguagePack& pack);
// Finite verb group; passive voice yields "<auxiliary> <participle>".
std::string inflect(const VerbEntry& entry, const Features& features,
                    const LanguagePack& pack);
std::string inflect(const AdjectiveEntry& entry, const Features& features,
                    const LanguagePack& pack);

const NounEntry& nounForType(std::string_view typeName, std::string_view language,
                             std::string_view reg, const KnowledgeBase& kb);

std::vector<SenseAlignment> senseAlignment(const Lexicon& lexicon);

Diagnostics checkAlignment(const Lexicon& lexicon,
                           const std::vector<std::string>& enabledLanguages);

// Paradigm classes, explicit-form coverage and pronoun coverage of the
// lexicon against the loaded packs.
Diagnostics checkLexiconAgainstPacks(const Lexicon& lexicon, const PackSet& packs);

LanguagePack loadPack(const std::filesystem::path& path);
PackSet loadPacks(const std::filesystem::path& dir,
                  const std::vector<std::string>& codes);

}  // namespace scribe
