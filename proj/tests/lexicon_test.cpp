#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "scribe/lexicon.hpp"
#include "support.hpp"

namespace scribe {
namespace {

using testing::demo;
using json = nlohmann::json;

const LanguagePack& en() { return demo().packs.get("en"); }
const LanguagePack& dm() { return demo().packs.get("demo"); }

template <typename F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ValidationFailed;
}

json oracle() {
  std::ifstream in(testing::testDataDir() / "morph_oracle.json");
  return json::parse(in);
}

// Every cell of every hand-compiled table, nothing more, nothing less.
TEST(MorphOracle, GeneratedTablesMatchCellForCell) {
  auto doc = oracle();
  for (const auto& [lang, tables] : doc.items()) {
    const auto& pack = demo().packs.get(lang);
    for (const auto& kind : {"nouns", "verbs"}) {
      std::set<std::string> classes;
      for (const auto& e : tables.at(kind)) {
        auto lemma = e.at("lemma").get<std::string>();
        auto cls = e.at("class").get<std::string>();
        classes.insert(cls);
        auto expected = e.at("forms").get<FormTable>();
        EXPECT_EQ(generateForms(lemma, cls, pack), expected) << lang << " " << lemma << " (" << cls << ")";
      }
      EXPECT_GE(classes.size(), std::string(kind) == "nouns" ? 3u : 2u) << lang << " " << kind;
    }
  }
}

TEST(Generate, KnownTables) {
  EXPECT_EQ(generateForms("statue", "regular-noun", en()), (FormTable{{"sg", "statue"}, {"pl", "statues"}}));
  EXPECT_EQ(generateForms("statua", "fem-a", dm()), (FormTable{{"sg", "statua"}, {"pl", "statue"}}));
}

TEST(Generate, Errors) {
  EXPECT_EQ(codeOf([] { generateForms("statue", "no-such-class", en()); }), ErrorCode::UnknownParadigmClass);
  EXPECT_EQ(codeOf([] { generateForms("vaso", "fem-a", dm()); }), ErrorCode::LemmaDoesNotMatchClassPattern);
}

TEST(Inflect, PassiveUsesAuxiliaryAndParticiple) {
  const auto& lex = demo().kb.lexicon();
  Features f;
  f.tense = "past";
  f.voice = "passive";
  EXPECT_EQ(inflect(*lex.verb("sculpt", "en"), f, en()), "was sculpted");
  EXPECT_EQ(inflect(*lex.verb("find", "en"), f, en()), "was found");
  f.number = "pl";
  EXPECT_EQ(inflect(*lex.verb("find", "en"), f, en()), "were found");
  Features pl;
  pl.number = "pl";
  EXPECT_EQ(inflect(*lex.noun("statue", "en"), pl, en()), "statues");
}

TEST(Inflect, DemoParticipleAgrees) {
  const auto& lex = demo().kb.lexicon();
  Features f;
  f.tense = "past";
  f.voice = "passive";
  f.gender = "f";
  EXPECT_EQ(inflect(*lex.verb("create", "demo"), f, dm()), "fu creata");
  f.gender = "m";
  f.number = "pl";
  EXPECT_EQ(inflect(*lex.verb("create", "demo"), f, dm()), "furono creati");
}

TEST(Inflect, OutOfGrid) {
  const auto& lex = demo().kb.lexicon();
  Features f;
  f.tense = "future";
  EXPECT_EQ(codeOf([&] { inflect(*lex.verb("sculpt", "en"), f, en()); }), ErrorCode::FeatureOutOfGrid);
  Features n;
  n.number = "dual";
  EXPECT_EQ(codeOf([&] { inflect(*lex.noun("statue", "en"), n, en()); }), ErrorCode::FeatureOutOfGrid);
}

TEST(Inflect, ExplicitFormsNeverConsultRules) {
  NounEntry n{"ox", "en", "ox", "n", "no-such-class", {}, {{"sg", "ox"}, {"pl", "oxen"}}};
  Features pl;
  pl.number = "pl";
  EXPECT_EQ(inflect(n, pl, en()), "oxen");
  EXPECT_EQ(formsOf(n, en()), n.forms);
}

TEST(NounForType, NearestAttachedSense) {
  const auto& kb = demo().kb;
  EXPECT_EQ(nounForType("statue", "en", "adult", kb).lemma, "statue");
  EXPECT_EQ(nounForType("statue", "demo", "adult", kb).lemma, "statua");
  EXPECT_EQ(nounForType("imperial-portrait", "en", "adult", kb).lemma, "statue");

  auto copy = kb;
  copy.lexicon().typeNouns.erase("kouros");
  EXPECT_EQ(nounForType("kouros", "en", "adult", copy).sense, "statue");

  copy.defineType("curiosity", "entity");
  EXPECT_EQ(codeOf([&] { nounForType("curiosity", "en", "adult", copy); }), ErrorCode::NoAlignedNoun);
}

TEST(NounForType, RegisterFilterAndFirstAttached) {
  auto kb = demo().kb;
  kb.lexicon().nouns.push_back(NounEntry{"pot", "en", "pot", "n", "regular-noun", {"child"}, {}});
  kb.lexicon().nouns.push_back(NounEntry{"pot", "demo", "vaso", "m", "masc-o", {"child"}, {}});
  kb.lexicon().typeNouns["vessel"].insert(kb.lexicon().typeNouns["vessel"].begin(), "pot");
  EXPECT_EQ(nounForType("vessel", "en", "child", kb).lemma, "pot");
  EXPECT_EQ(nounForType("vessel", "en", "adult", kb).lemma, "vase");
}

TEST(NounForType, StableUnderUnrelatedAdditions) {
  auto kb = demo().kb;
  std::vector<std::string> types;
  for (const auto& t : kb.types()) types.push_back(t.name);
  for (unsigned seed = 0; seed < 50; ++seed) {
    auto g = testing::rng(seed);
    auto target = testing::pick(g, types);
    auto chain = kb.ancestry(target);
    std::optional<std::string> before;
    try {
      before = nounForType(target, "en", "adult", kb).sense;
    } catch (const Error&) {
    }
    auto copy = kb;
    for (int i = 0; i < 3; ++i) {
      auto other = testing::pick(g, types);
      if (std::find(chain.begin(), chain.end(), other) != chain.end()) continue;
      auto sense = "extra-" + std::to_string(seed) + "-" + std::to_string(i);
      copy.lexicon().nouns.push_back(NounEntry{sense, "en", "thing", "n", "regular-noun", {}, {}});
      copy.lexicon().typeNouns[other].insert(copy.lexicon().typeNouns[other].begin(), sense);
    }
    std::optional<std::string> after;
    try {
      after = nounForType(target, "en", "adult", copy).sense;
    } catch (const Error&) {
    }
    EXPECT_EQ(before, after) << "seed " << seed << " type " << target;
  }
}

TEST(Alignment, DemoIsAligned) {
  EXPECT_TRUE(checkAlignment(demo().kb.lexicon(), demo().kb.languages()).empty());
  EXPECT_TRUE(checkLexiconAgainstPacks(demo().kb.lexicon(), demo().packs).empty());
}

TEST(Alignment, MissingStatuaIsNamed) {
  auto lex = demo().kb.lexicon();
  std::erase_if(lex.nouns, [](const NounEntry& n) { return n.sense == "statue" && n.language == "demo"; });
  auto diags = checkAlignment(lex, {"en", "demo"});
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].message.find("'statue'"), std::string::npos);
  EXPECT_NE(diags[0].message.find("'demo'"), std::string::npos);
}

TEST(Alignment, DisabledLanguageOnlySenses) {
  auto lex = demo().kb.lexicon();
  lex.nouns.push_back(NounEntry{"urn", "xx", "urnu", "n", "any", {}, {{"sg", "urnu"}}});
  lex.verbs.push_back(VerbEntry{"polish", "xx", "polira", "any", {}, {{"participle", "polit"}}});
  std::vector<std::string> enabled{"en", "demo"};
  // brute force: every sense that lacks an entry in an enabled language
  std::size_t expected = 0;
  for (const auto& a : senseAlignment(lex))
    for (const auto& l : enabled) expected += a.presence.count(l) == 0;
  EXPECT_EQ(expected, 4u);
  EXPECT_EQ(checkAlignment(lex, enabled).size(), expected);
}

TEST(Packs, MissingPronounCellIsReported) {
  PackSet packs;
  auto pack = en();
  pack.functionWords.pronouns.erase("n.sg.nom");
  packs.add(pack);
  packs.add(dm());
  auto diags = checkLexiconAgainstPacks(demo().kb.lexicon(), packs);
  EXPECT_TRUE(has_errors(diags));
}

TEST(Packs, UnknownClassIsReported) {
  auto lex = demo().kb.lexicon();
  lex.nouns.push_back(NounEntry{"urn", "en", "urn", "n", "no-such-class", {}, {}});
  lex.nouns.push_back(NounEntry{"urn", "demo", "urna", "f", "fem-a", {}, {}});
  auto diags = checkLexiconAgainstPacks(lex, demo().packs);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].severity, Severity::Error);
}

// Random lemmas that satisfy each class pattern must yield a total table.
TEST(PackProperty, EveryClassIsTotalOverItsGrid) {
  for (const auto* pack : {&en(), &dm()}) {
    auto check = [&](const std::map<std::string, Paradigm>& paradigms, WordClass cls) {
      auto grid = pack->grid(cls);
      std::set<std::string> cells(grid.begin(), grid.end());
      for (const auto& [id, p] : paradigms)
        for (unsigned seed = 0; seed < 20; ++seed) {
          auto g = testing::rng(seed);
          std::string stem;
          int len = testing::uniform(g, 1, 6);
          for (int i = 0; i < len; ++i) stem += static_cast<char>('b' + testing::uniform(g, 0, 20));
          auto forms = generateForms(stem + p.strip, id, *pack);
          std::set<std::string> got;
          for (const auto& [cell, form] : forms) {
            got.insert(cell);
            EXPECT_FALSE(form.empty()) << pack->code << " " << id << " " << cell;
          }
          for (const auto& c : cells) EXPECT_TRUE(got.count(c)) << pack->code << " " << id << " missing " << c;
        }
    };
    check(pack->nounParadigms, WordClass::Noun);
    check(pack->verbParadigms, WordClass::Verb);
    check(pack->adjectiveParadigms, WordClass::Adjective);
  }
}

TEST(Packs, LoadErrors) {
  EXPECT_THROW(loadPack(testing::testDataDir() / "no-such-pack.json"), Error);
  EXPECT_EQ(codeOf([] { demo().packs.get("xx"); }), ErrorCode::UnknownLanguage);
}

}  // namespace
}  // namespace scribe
