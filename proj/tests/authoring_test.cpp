#include <gtest/gtest.h>

#include <algorithm>

#include "scribe/authoring.hpp"
#include "scribe/bundle.hpp"
#include "support.hpp"

namespace scribe {
namespace {

using testing::demo;
using json = nlohmann::json;

EditResult apply(const KnowledgeBase& kb, const std::string& op, const std::string& target, json payload) {
  return applyEdit(kb, demo().packs, Edit{op, target, std::move(payload)});
}

bool mentions(const Diagnostics& diags, const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
    return d.message.find(needle) != std::string::npos || d.location.find(needle) != std::string::npos;
  });
}

KnowledgeBase withoutStatueNoun() {
  auto kb = demo().kb;
  std::erase_if(kb.lexicon().nouns, [](const NounEntry& n) { return n.sense == "statue"; });
  std::erase(kb.lexicon().typeNouns["statue"], "statue");
  kb.lexicon().typeNouns.erase("statue");
  return kb;
}

TEST(DomainEdit, AttachingANounInEveryLanguageClearsAlignment) {
  auto kb = withoutStatueNoun();
  auto r = apply(kb, "noun.attach", "statue",
                 {{"sense", "statue"}, {"language", "en"}, {"lemma", "statue"}, {"gender", "n"}, {"class", "regular-noun"}});
  ASSERT_TRUE(r.committed);
  EXPECT_EQ(r.result.at("forms"), json({{"pl", "statues"}, {"sg", "statue"}}));
  EXPECT_TRUE(mentions(r.diagnostics, "sense 'statue' has no entry in language 'demo'"));
  EXPECT_FALSE(has_errors(r.diagnostics));

  auto r2 = apply(r.kb, "noun.attach", "statue",
                  {{"sense", "statue"}, {"language", "demo"}, {"lemma", "statua"}, {"gender", "f"}, {"class", "fem-a"}});
  ASSERT_TRUE(r2.committed);
  EXPECT_EQ(r2.result.at("forms").at("pl"), "statue");
  EXPECT_TRUE(checkAlignment(r2.kb.lexicon(), r2.kb.languages()).empty());
  EXPECT_TRUE(r2.diagnostics.empty());
}

TEST(DomainEdit, BadParadigmIsRejected) {
  auto r = apply(demo().kb, "noun.attach", "statue",
                 {{"sense", "urn"}, {"language", "demo"}, {"lemma", "urno"}, {"gender", "f"}, {"class", "fem-a"}});
  EXPECT_FALSE(r.committed);
  EXPECT_TRUE(r.kb == demo().kb);
  EXPECT_TRUE(has_errors(r.diagnostics));
}

TEST(DomainEdit, FieldRenameCascades) {
  auto r = apply(demo().kb, "field.rename", "statue", {{"from", "sculpted-by"}, {"to", "carved-by"}});
  ASSERT_TRUE(r.committed) << r.diagnostics.size();
  const auto& kb = r.kb;
  EXPECT_EQ(kb.fact("statue1-sculpted-by").field, "carved-by");
  EXPECT_FALSE(kb.templatesFor("carved-by", "en").empty());
  EXPECT_TRUE(kb.templatesFor("sculpted-by", "en").empty());
  const auto& schema = kb.findSchema("statue")->fields;
  EXPECT_NE(std::find(schema.begin(), schema.end(), "carved-by"), schema.end());
  EXPECT_EQ(std::find(schema.begin(), schema.end(), "sculpted-by"), schema.end());
}

TEST(DomainEdit, TypeWithEntitiesIsNotRemoved) {
  auto r = apply(demo().kb, "type.remove", "coin", json::object());
  EXPECT_FALSE(r.committed);
  EXPECT_EQ(r.error, ErrorCode::TypeInUse);
  auto ok = apply(demo().kb, "type.add", "amphora", {{"parent", "vessel"}});
  ASSERT_TRUE(ok.committed);
  EXPECT_TRUE(ok.kb.isSubtype("amphora", "exhibit"));
}

TEST(ExhibitEdit, GenericDefaultIsInherited) {
  auto kb = demo().kb;
  kb.addEntity(Entity{"kouros2", "kouros", false, {}, {}});
  auto r = apply(kb, "generic.set", "generic-kouros",
                 {{"field", "creation-period"}, {"value", {{"entity", "classical-period"}}}});
  ASSERT_TRUE(r.committed);
  for (const auto* id : {"kouros1", "kouros2"}) {
    auto facts = r.kb.effectiveFacts(id);
    auto it = std::find_if(facts.begin(), facts.end(), [](const Fact& f) { return f.field == "creation-period"; });
    ASSERT_NE(it, facts.end()) << id;
    EXPECT_EQ(it->value, FactValue(EntityRef{"classical-period"})) << id;
  }
  auto notGeneric = apply(kb, "generic.set", "kouros1", {{"field", "creation-period"}, {"value", {{"entity", "archaic-period"}}}});
  EXPECT_FALSE(notGeneric.committed);
}

TEST(ExhibitEdit, SecondCurrentLocationIsRejected) {
  auto r = apply(demo().kb, "fact.assert", "vase1", {{"field", "current-location"}, {"value", {{"entity", "rome"}}}});
  EXPECT_FALSE(r.committed);
  EXPECT_EQ(r.error, ErrorCode::CardinalityViolation);
  EXPECT_TRUE(mentions(r.diagnostics, "CardinalityViolation"));
  EXPECT_TRUE(r.kb == demo().kb);
}

TEST(ExhibitEdit, AssertReturnsTheNewId) {
  auto r = apply(demo().kb, "fact.assert", "kouros1", {{"field", "current-location"}, {"value", {{"entity", "athens"}}}});
  ASSERT_TRUE(r.committed);
  auto id = r.result.at("id").get<std::string>();
  EXPECT_EQ(r.kb.fact(id).owner, "kouros1");
  auto back = apply(r.kb, "fact.retract", id, json::object());
  ASSERT_TRUE(back.committed);
  EXPECT_TRUE(back.kb == demo().kb);
}

// Hand-ranked oracle: after the override the bibliography fact must take
// the last slot in a 4-item expert description.
TEST(ExhibitEdit, ScoreOverrideChangesRanking) {
  auto rankBy = [](const KnowledgeBase& kb) {
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto* f : kb.factsOf("statue1")) {
      auto sc = kb.scoresFor(f->scores, "expert");
      ranked.emplace_back(-(sc.interest + sc.importance) / 2, f->id);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return ranked;
  };
  auto r = apply(demo().kb, "scores.set", "statue1-bibliography",
                 {{"userType", "expert"}, {"interest", 0.9}, {"importance", 0.6}, {"assimilation", 0}});
  ASSERT_TRUE(r.committed);
  auto oracle = rankBy(r.kb);
  EXPECT_EQ(oracle[2].second, "statue1-bibliography");
  EXPECT_NE(rankBy(demo().kb)[2].second, "statue1-bibliography");

  auto s = newSession(r.kb, "expert", "en", SessionOverrides{.maxFacts = 4});
  auto chosen = selectFacts(r.kb, s, "statue1").chosenFacts;
  ASSERT_EQ(chosen.size(), 4u);
  EXPECT_EQ(chosen[3], "statue1-bibliography");
  auto before = selectFacts(demo().kb, newSession(demo().kb, "expert", "en", SessionOverrides{.maxFacts = 4}),
                            "statue1").chosenFacts;
  EXPECT_EQ(std::count(before.begin(), before.end(), "statue1-bibliography"), 0);
}

TEST(ExhibitEdit, MalformedPayloads) {
  auto r = apply(demo().kb, "fact.assert", "vase1", {{"value", {{"entity", "rome"}}}});
  EXPECT_FALSE(r.committed);
  EXPECT_EQ(r.error, ErrorCode::InvalidEdit);
  auto badValue = apply(demo().kb, "fact.assert", "vase1", {{"field", "current-location"}, {"value", 1}});
  EXPECT_FALSE(badValue.committed);
  EXPECT_EQ(badValue.error, ErrorCode::ParseError);
  auto unknown = apply(demo().kb, "fact.bend", "vase1", json::object());
  EXPECT_FALSE(unknown.committed);
}

TEST(Roles, ExhibitAuthorsCannotChangeTheModel) {
  auto denied = [](AuthorRole role, const std::string& op) {
    try {
      roleCheck(role, Edit{op, "", json::object()});
      return false;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::PermissionDenied);
      return true;
    }
  };
  EXPECT_TRUE(denied(AuthorRole::ExhibitAuthor, "field.add"));
  EXPECT_TRUE(denied(AuthorRole::ExhibitAuthor, "type.add"));
  EXPECT_FALSE(denied(AuthorRole::ExhibitAuthor, "fact.assert"));
  EXPECT_FALSE(denied(AuthorRole::DomainAuthor, "field.add"));
  EXPECT_FALSE(denied(AuthorRole::DomainAuthor, "fact.assert"));
  EXPECT_THROW(roleCheck(AuthorRole::DomainAuthor, Edit{"nope.nope", "", json::object()}), Error);
  EXPECT_EQ(parseRole("exhibit-author"), AuthorRole::ExhibitAuthor);
  EXPECT_FALSE(parseRole("curator"));
}

TEST(Edits, JsonRoundTrip) {
  Edit e{"fact.assert", "vase1", {{"field", "current-location"}}};
  auto back = editFromJson(editToJson(e));
  EXPECT_EQ(back.op, e.op);
  EXPECT_EQ(back.target, e.target);
  EXPECT_EQ(back.payload, e.payload);
}

// Random edit sequences: every committed snapshot validates cleanly.
TEST(AuthoringProperty, NeverCommitsAnInvalidKb) {
  std::vector<std::string> entities{"vase1", "statue1", "kouros1", "coin1", "attica", "rome", "polyklitus",
                                    "generic-kouros", "ghost"};
  std::vector<std::string> fields{"current-location", "previous-locations", "creation-period", "sculpted-by",
                                  "excavated-at", "creation-time", "weight"};
  for (unsigned seed = 0; seed < 60; ++seed) {
    auto g = testing::rng(seed);
    auto kb = demo().kb;
    for (int step = 0; step < 8; ++step) {
      Edit e;
      switch (testing::uniform(g, 0, 4)) {
        case 0:
          e = {"fact.assert", testing::pick(g, entities),
               {{"field", testing::pick(g, fields)}, {"value", {{"entity", testing::pick(g, entities)}}}}};
          break;
        case 1:
          if (kb.facts().empty()) continue;
          e = {"fact.retract", kb.facts()[static_cast<std::size_t>(testing::uniform(g, 0, int(kb.facts().size()) - 1))].id,
               json::object()};
          break;
        case 2:
          e = {"entity.remove", testing::pick(g, entities), json::object()};
          break;
        case 3:
          e = {"type.remove", testing::pick(g, {"coin", "place", "vessel", "statue"}), json::object()};
          break;
        default:
          e = {"noun.remove", testing::pick(g, {"vase", "statue", "coin"}), {{"language", "demo"}}};
      }
      auto r = applyEdit(kb, demo().packs, e);
      if (r.committed) {
        EXPECT_FALSE(has_errors(checkAll(r.kb, demo().packs))) << "seed " << seed << " " << e.op;
        kb = r.kb;
      } else {
        EXPECT_TRUE(r.kb == kb) << "seed " << seed;
      }
    }
  }
}

TEST(Preview, EqualsALiveSession) {
  const auto& kb = demo().kb;
  auto p = previewDescription(kb, demo().packs, PreviewRequest{"vase1", "en", "adult", 10, {}});
  ASSERT_TRUE(p.description);
  auto s = newSession(kb, "adult", "en", SessionOverrides{.maxFacts = 10});
  EXPECT_EQ(p.description->text, describe(kb, demo().packs, s, "vase1").text);
}

TEST(Preview, HistoryProducesTheComparison) {
  auto p = previewDescription(demo().kb, demo().packs, PreviewRequest{"kouros1", "en", "adult", 10, {"vase1"}});
  ASSERT_TRUE(p.description);
  EXPECT_NE(p.description->text.text.find("Like the vase you saw earlier, this kouros was created in the archaic period."),
            std::string::npos);
}

TEST(Preview, UnalignedSenseIsNamed) {
  auto kb = demo().kb;
  std::erase_if(kb.lexicon().verbs, [](const VerbEntry& v) { return v.sense == "find" && v.language == "demo"; });
  auto p = previewDescription(kb, demo().packs, PreviewRequest{"vase1", "demo", "adult", 10, {}});
  EXPECT_FALSE(p.description);
  EXPECT_TRUE(has_errors(p.diagnostics));
  EXPECT_TRUE(mentions(p.diagnostics, "sense 'find'"));
}

TEST(Preview, HasNoSideEffects) {
  auto kb = demo().kb;
  auto snapshot = dumpBundle(kb);
  auto live = newSession(kb, "adult", "en");
  describe(kb, demo().packs, live, "vase1");
  auto liveBefore = live;
  previewDescription(kb, demo().packs, PreviewRequest{"kouros1", "en", "adult", 10, {"vase1", "coin1"}});
  EXPECT_EQ(dumpBundle(kb), snapshot);
  EXPECT_EQ(live, liveBefore);
}

}  // namespace
}  // namespace scribe
