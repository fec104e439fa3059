#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "scribe/kb.hpp"
#include "scribe/lexicon.hpp"
#include "scribe/microplanner.hpp"
#include "scribe/planner.hpp"

namespace scribe {

// Offsets are in Unicode code points, end exclusive.
struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TextSpan&) const = default;
};

struct MentionSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entityId;

  bool operator==(const MentionSpan&) const = default;
};

struct AnnotatedText {
  std::string text;
  std::vector<TextSpan> sentences;
  std::vector<MentionSpan> mentions;
  std::vector<std::string> factsExpressed;

  bool operator==(const AnnotatedText&) const = default;
};

// What the realizer did for one finite verb, kept for agreement checks.
struct ClauseTrace {
  std::string language;
  std::string verb;
  std::string tense;
  std::string voice;  // "active", "passive" or "copular"
  std::string subjectEntity;
  std::string person;
  std::string number;
  std::string gender;
  std::string verbForm;

  bool operator==(const ClauseTrace&) const = default;
};

struct RealizedSentence {
  std::string text;                   // empty for absorbed clauses
  std::vector<MentionSpan> mentions;  // relative to `text`
  std::vector<ClauseTrace> traces;
};

RealizedSentence realizeSentence(const SentenceSpec& spec, const LanguagePack& pack,
                                 const KnowledgeBase& kb, std::string_view reg = {});

AnnotatedText realizeDocument(const DocumentPlan& plan, const std::vector<SentenceSpec>& specs,
                              const LanguagePack& pack, const KnowledgeBase& kb,
                              std::string_view reg = {}, std::vector<ClauseTrace>* traces = nullptr);

// One clause for the first fact of `field` (entity-id order), owner as a
// demonstrative NP, first template in list order.
std::string previewPhrase(const std::string& field, const std::string& language,
                          const KnowledgeBase& kb, const PackSet& packs);

nlohmann::json annotatedToJson(const AnnotatedText& t);

}  // namespace scribe
