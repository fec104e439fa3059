#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "scribe/bundle.hpp"
#include "scribe/kb.hpp"
#include "support.hpp"

namespace scribe {
namespace {

using testing::demo;

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

std::vector<std::string> names(const std::vector<FieldDef>& fields) {
  std::vector<std::string> out;
  for (const auto& f : fields) out.push_back(f.name);
  return out;
}

FieldDef relation(std::string name, std::string filler, bool setValued = false) {
  FieldDef f;
  f.name = std::move(name);
  f.kind = FieldKind::Relation;
  f.fillerType = std::move(filler);
  f.setValued = setValued;
  return f;
}

TEST(Hierarchy, KourosIsAStatueAndAnExhibit) {
  KnowledgeBase kb;
  kb.defineType("exhibit", "entity");
  kb.defineType("statue", "exhibit");
  kb.defineType("kouros", "statue");
  EXPECT_EQ(kb.ancestry("kouros"), (std::vector<std::string>{"kouros", "statue", "exhibit", "entity"}));
  EXPECT_TRUE(kb.isSubtype("kouros", "exhibit"));
  EXPECT_TRUE(kb.isSubtype("kouros", "kouros"));
  EXPECT_FALSE(kb.isSubtype("exhibit", "kouros"));
}

TEST(Hierarchy, DefineTypeErrors) {
  auto kb = demo().kb;
  EXPECT_EQ(codeOf([&] { kb.defineType("vessel2", "entity-that-does-not-exist"); }), ErrorCode::UnknownParent);
  EXPECT_EQ(codeOf([&] { kb.defineType("statue", "exhibit"); }), ErrorCode::DuplicateType);
  EXPECT_EQ(codeOf([&] { kb.defineType("Bad Name", "exhibit"); }), ErrorCode::InvalidIdentifier);
  EXPECT_EQ(codeOf([&] { kb.isSubtype("kouros", "nope"); }), ErrorCode::UnknownType);
}

TEST(Fields, SculptedByReachesEveryStatueSubtype) {
  const auto& kb = demo().kb;
  auto kouros = names(kb.fieldsOf("kouros"));
  auto exhibit = names(kb.fieldsOf("exhibit"));
  ASSERT_GE(kouros.size(), exhibit.size() + 1);
  EXPECT_TRUE(std::equal(exhibit.begin(), exhibit.end(), kouros.begin()));
  EXPECT_EQ(kouros.back(), "sculpted-by");
  EXPECT_TRUE(kb.findField("imperial-portrait", "sculpted-by"));

  auto vessel = names(kb.fieldsOf("vessel"));
  EXPECT_NE(std::find(vessel.begin(), vessel.end(), "creation-period"), vessel.end());
  EXPECT_EQ(std::find(vessel.begin(), vessel.end(), "sculpted-by"), vessel.end());
  EXPECT_TRUE(kb.fieldsOf("entity").empty());
}

TEST(Fields, CollisionsAndFillers) {
  auto kb = demo().kb;
  EXPECT_EQ(codeOf([&] { kb.defineField("kouros", relation("creation-period", "historical-period")); }),
            ErrorCode::FieldNameCollision);
  // downward: a subtype already introduces the name
  EXPECT_EQ(codeOf([&] { kb.defineField("exhibit", relation("sculpted-by", "sculptor")); }),
            ErrorCode::FieldNameCollision);
  EXPECT_EQ(codeOf([&] { kb.defineField("coin", relation("minted-at", "no-such-type")); }),
            ErrorCode::BadFillerType);
  EXPECT_EQ(codeOf([&] { kb.defineField("nope", relation("x", "place")); }), ErrorCode::UnknownType);
  // a sibling may reuse a name
  kb.defineField("coin", relation("minted-at", "place"));
  kb.defineField("vessel", relation("minted-at", "place"));
  EXPECT_TRUE(validate(kb).empty());
}

TEST(Fields, SetValuedAcceptsSeveralFillers) {
  auto kb = demo().kb;
  kb.assertFact("vase1", "previous-locations", EntityRef{"athens"});
  kb.assertFact("vase1", "previous-locations", EntityRef{"rome"});
  int n = 0;
  for (const auto& f : kb.effectiveFacts("vase1")) n += f.field == "previous-locations";
  EXPECT_EQ(n, 2);
  EXPECT_EQ(codeOf([&] { kb.assertFact("vase1", "previous-locations", EntityRef{"rome"}); }),
            ErrorCode::CardinalityViolation);
}

TEST(Facts, AssertChecks) {
  auto kb = demo().kb;
  EXPECT_EQ(codeOf([&] { kb.assertFact("vase1", "sculpted-by", EntityRef{"polyklitus"}); }), ErrorCode::UnknownField);
  EXPECT_EQ(codeOf([&] { kb.assertFact("vase1", "creation-period", EntityRef{"classical-period"}); }),
            ErrorCode::CardinalityViolation);  // vase1 already has one
  EXPECT_EQ(codeOf([&] { kb.assertFact("coin1", "creation-period", EntityRef{"attica"}); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(codeOf([&] { kb.assertFact("coin1", "creation-time", EntityRef{"attica"}); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(codeOf([&] { kb.assertFact("ghost", "creation-time", Date{-500}); }), ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { kb.assertFact("vase1", "current-location", EntityRef{"naples"}); }),
            ErrorCode::CardinalityViolation);
  ScoreMap bad{{"adult", FactScores{1.5, 0.5, 0}}};
  EXPECT_EQ(codeOf([&] { kb.assertFact("coin1", "excavated-at", EntityRef{"attica"}, bad); }), ErrorCode::InvalidScore);
  // subtypes are accepted as fillers
  auto id = kb.assertFact("coin1", "excavated-at", EntityRef{"athens"});
  EXPECT_EQ(kb.fact(id).owner, "coin1");
}

TEST(Facts, StatueSculptedByPolyklitus) {
  const auto& kb = demo().kb;
  auto facts = kb.effectiveFacts("statue1");
  auto it = std::find_if(facts.begin(), facts.end(), [](const Fact& f) { return f.field == "sculpted-by"; });
  ASSERT_NE(it, facts.end());
  EXPECT_EQ(std::get<EntityRef>(it->value).id, "polyklitus");
}

TEST(Generics, KourosInheritsArchaicPeriod) {
  auto kb = demo().kb;
  auto facts = kb.effectiveFacts("kouros1");
  auto period = std::find_if(facts.begin(), facts.end(), [](const Fact& f) { return f.field == "creation-period"; });
  ASSERT_NE(period, facts.end());
  EXPECT_EQ(std::get<EntityRef>(period->value).id, "archaic-period");
  EXPECT_EQ(period->owner, "generic-kouros");

  kb.addEntity(Entity{"kouros2", "kouros", false, {}, {}});
  auto own = kb.assertFact("kouros2", "creation-period", EntityRef{"classical-period"});
  auto facts2 = kb.effectiveFacts("kouros2");
  int periods = 0;
  for (const auto& f : facts2)
    if (f.field == "creation-period") {
      ++periods;
      EXPECT_EQ(f.id, own);
    }
  EXPECT_EQ(periods, 1);
}

TEST(Generics, OnlyOwnFactsWithoutGenerics) {
  const auto& kb = demo().kb;
  std::vector<std::string> own, effective;
  for (const auto* f : kb.factsOf("vase1")) own.push_back(f->id);
  for (const auto& f : kb.effectiveFacts("vase1")) effective.push_back(f.id);
  EXPECT_EQ(own, effective);
  EXPECT_EQ(codeOf([&] { kb.effectiveFacts("generic-kouros"); }), ErrorCode::GenericEntityQueried);
  EXPECT_EQ(codeOf([&] { kb.effectiveFacts("nobody"); }), ErrorCode::UnknownEntity);
}

TEST(Generics, AncestorGenericContributesNearestFirst) {
  auto kb = demo().kb;
  kb.addEntity(Entity{"generic-statue", "statue", true, {}, {}});
  kb.assertFact("generic-statue", "creation-period", EntityRef{"classical-period"});
  kb.assertFact("generic-statue", "current-location", EntityRef{"athens"});
  auto facts = kb.effectiveFacts("kouros1");
  std::map<std::string, std::string> byField;
  for (const auto& f : facts) byField.emplace(f.field, f.owner);
  EXPECT_EQ(byField["creation-period"], "generic-kouros");
  EXPECT_EQ(byField["current-location"], "generic-statue");
  EXPECT_EQ(codeOf([&] { kb.addEntity(Entity{"generic-statue-2", "statue", true, {}, {}}); }),
            ErrorCode::DuplicateGeneric);
  EXPECT_EQ(codeOf([&] { kb.assertFact("generic-statue", "previous-locations", EntityRef{"rome"}); }),
            ErrorCode::CardinalityViolation);
}

TEST(Validate, DemoIsClean) { EXPECT_TRUE(validate(demo().kb).empty()); }

TEST(Validate, DanglingFillerIsOneError) {
  auto kb = demo().kb;
  kb.loadFact(Fact{"coin1-excavated-at-ghost", "coin1", "excavated-at", EntityRef{"ghost-place"}, {}});
  auto diags = validate(kb);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].severity, Severity::Error);
  EXPECT_EQ(diags[0].location, "facts/coin1-excavated-at-ghost");
}

TEST(Validate, MissingCannedLanguagesAreWarnings) {
  auto kb = demo().kb;
  // strip "demo" from every other canned fact, then count by brute force
  int i = 0;
  std::vector<Fact> stripped;
  for (const auto& f : kb.facts()) {
    auto def = kb.findField(kb.entity(f.owner).typeName, f.field);
    if (def && def->cannedText && i++ % 2 == 0) {
      Fact copy = f;
      std::get<LocalizedText>(copy.value).erase("demo");
      stripped.push_back(copy);
    }
  }
  ASSERT_FALSE(stripped.empty());
  for (const auto& f : stripped) {
    kb.retractFact(f.id);
    kb.loadFact(f);
  }
  std::size_t expected = 0;
  for (const auto& f : kb.facts())
    if (const auto* t = std::get_if<LocalizedText>(&f.value))
      for (const auto& lang : kb.languages()) expected += t->count(lang) == 0;
  auto diags = validate(kb);
  EXPECT_FALSE(has_errors(diags));
  EXPECT_EQ(diags.size(), expected);
}

TEST(Rename, FieldRenameCascades) {
  auto kb = demo().kb;
  kb.renameField("statue", "sculpted-by", "carved-by");
  EXPECT_TRUE(kb.findField("statue", "carved-by"));
  EXPECT_FALSE(kb.findField("statue", "sculpted-by"));
  for (const auto& f : kb.facts()) EXPECT_NE(f.field, "sculpted-by");
  EXPECT_FALSE(kb.templatesFor("carved-by", "en").empty());
  EXPECT_TRUE(kb.templatesFor("sculpted-by", "en").empty());
  const auto* schema = kb.findSchema("statue");
  ASSERT_NE(schema, nullptr);
  EXPECT_NE(std::find(schema->fields.begin(), schema->fields.end(), "carved-by"), schema->fields.end());
  EXPECT_TRUE(validate(kb).empty());
}

TEST(Rename, TypeRenameCascadesAndRemovalIsRefused) {
  auto kb = demo().kb;
  kb.renameType("vessel", "pot");
  EXPECT_EQ(kb.entity("vase1").typeName, "pot");
  EXPECT_TRUE(kb.lexicon().typeNouns.count("pot"));
  EXPECT_TRUE(validate(kb).empty());
  EXPECT_EQ(codeOf([&] { kb.removeType("pot"); }), ErrorCode::TypeInUse);
  EXPECT_EQ(codeOf([&] { kb.removeType("statue"); }), ErrorCode::TypeInUse);
  kb.defineType("amphora", "pot");
  kb.removeType("amphora");
  EXPECT_FALSE(kb.findType("amphora"));
}

// ---------------------------------------------------------------- properties

struct RandomKb {
  KnowledgeBase kb;
  std::vector<std::string> types{"entity"};
};

RandomKb randomKb(unsigned seed) {
  auto g = testing::rng(seed);
  RandomKb r;
  auto& kb = r.kb;
  kb.setLanguages({"en", "demo"});
  kb.setUserType(UserTypeDef{"adult", "adult", 5, {}});
  int nTypes = testing::uniform(g, 1, 8);
  for (int i = 0; i < nTypes; ++i) {
    auto name = "t" + std::to_string(i);
    kb.defineType(name, testing::pick(g, r.types));
    r.types.push_back(name);
  }
  int nFields = testing::uniform(g, 0, 10);
  for (int i = 0; i < nFields; ++i) {
    FieldDef f;
    f.name = "f" + std::to_string(i);
    if (testing::uniform(g, 0, 1)) {
      f.kind = FieldKind::Relation;
      f.fillerType = testing::pick(g, r.types);
      f.setValued = testing::uniform(g, 0, 2) == 0;
    } else {
      f.kind = FieldKind::Attribute;
      f.datatype = static_cast<Datatype>(testing::uniform(g, 1, 3));
      f.cannedText = f.datatype == Datatype::LocalizedString && testing::uniform(g, 0, 1);
    }
    try {
      kb.defineField(testing::pick(g, r.types), f);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::FieldNameCollision) << "seed " << seed;
    }
  }
  int nEntities = testing::uniform(g, 0, 10);
  for (int i = 0; i < nEntities; ++i) {
    Entity e{"e" + std::to_string(i), testing::pick(g, r.types), testing::uniform(g, 0, 4) == 0, {}, {}};
    if (testing::uniform(g, 0, 1)) e.names["en"] = ProperName{"Name " + std::to_string(i), ""};
    try {
      kb.addEntity(e);
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::DuplicateGeneric) << "seed " << seed;
    }
  }
  for (int i = 0; i < 20 && !kb.entities().empty(); ++i) {
    const auto& owner = kb.entities()[static_cast<std::size_t>(testing::uniform(g, 0, static_cast<int>(kb.entities().size()) - 1))];
    auto fields = kb.fieldsOf(owner.typeName);
    if (fields.empty()) continue;
    const auto& f = fields[static_cast<std::size_t>(testing::uniform(g, 0, static_cast<int>(fields.size()) - 1))];
    FactValue value;
    if (f.kind == FieldKind::Relation) {
      std::vector<std::string> fillers;
      for (const auto& e : kb.entities())
        if (!e.generic && kb.isSubtype(e.typeName, f.fillerType)) fillers.push_back(e.id);
      if (fillers.empty()) continue;
      value = EntityRef{testing::pick(g, fillers)};
    } else if (f.datatype == Datatype::Date) {
      value = Date{testing::uniform(g, -3000, 2000), testing::uniform(g, 0, 12), 0};
    } else if (f.datatype == Datatype::Number) {
      value = static_cast<double>(testing::uniform(g, -100, 100)) / 4.0;
    } else {
      value = LocalizedText{{"en", "text " + std::to_string(i)}, {"demo", "testo " + std::to_string(i)}};
    }
    ScoreMap scores;
    if (testing::uniform(g, 0, 1))
      scores["adult"] = FactScores{testing::score(g), testing::score(g), testing::score(g)};
    try {
      kb.assertFact(owner.id, f.name, value, scores);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CardinalityViolation) << "seed " << seed;
    }
  }
  return r;
}

constexpr unsigned kSeeds = 200;

TEST(KbProperty, EveryTypeHasOnePathToRoot) {
  for (unsigned seed = 0; seed < kSeeds; ++seed) {
    auto r = randomKb(seed);
    ASSERT_TRUE(validate(r.kb).empty()) << "seed " << seed;
    for (const auto& t : r.kb.types()) {
      auto chain = r.kb.ancestry(t.name);
      ASSERT_EQ(chain.front(), t.name);
      ASSERT_EQ(chain.back(), "entity");
      std::set<std::string> unique(chain.begin(), chain.end());
      EXPECT_EQ(unique.size(), chain.size()) << "seed " << seed;
      for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        EXPECT_EQ(*r.kb.type(chain[i]).parent, chain[i + 1]) << "seed " << seed;
    }
  }
}

TEST(KbProperty, FieldAvailabilityIsMonotone) {
  for (unsigned seed = 0; seed < kSeeds; ++seed) {
    auto r = randomKb(seed);
    for (const auto& sub : r.types)
      for (const auto& sup : r.kb.ancestry(sub)) {
        auto a = names(r.kb.fieldsOf(sub));
        auto b = names(r.kb.fieldsOf(sup));
        std::set<std::string> as(a.begin(), a.end());
        for (const auto& f : b) EXPECT_TRUE(as.count(f)) << "seed " << seed << " " << sub << " " << sup;
      }
  }
}

TEST(KbProperty, AssertedFactSurfacesOnce) {
  for (unsigned seed = 0; seed < kSeeds; ++seed) {
    auto r = randomKb(seed);
    for (const auto& e : r.kb.entities()) {
      if (e.generic) continue;
      auto eff = r.kb.effectiveFacts(e.id);
      for (const auto* f : r.kb.factsOf(e.id))
        EXPECT_EQ(std::count_if(eff.begin(), eff.end(), [&](const Fact& x) { return x.id == f->id; }), 1)
            << "seed " << seed;
    }
  }
}

TEST(KbProperty, OwnValueSuppressesGenericDefault) {
  for (unsigned seed = 0; seed < kSeeds; ++seed) {
    auto r = randomKb(seed);
    for (const auto& e : r.kb.entities()) {
      if (e.generic) continue;
      std::set<std::string> ownFields;
      for (const auto* f : r.kb.factsOf(e.id)) ownFields.insert(f->field);
      for (const auto& f : r.kb.effectiveFacts(e.id))
        if (ownFields.count(f.field)) {
          EXPECT_EQ(f.owner, e.id) << "seed " << seed;
        }
    }
  }
}

TEST(KbProperty, BundleRoundTripIsIdentity) {
  for (unsigned seed = 0; seed < kSeeds; ++seed) {
    auto r = randomKb(seed);
    auto text = dumpBundle(r.kb);
    auto back = parseBundle(text);
    EXPECT_TRUE(back == r.kb) << "seed " << seed;
    EXPECT_EQ(dumpBundle(back), text) << "seed " << seed;
  }
}

}  // namespace
}  // namespace scribe
