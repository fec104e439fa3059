#pragma once

#include <string>
#include <vector>

#include "scribe/kb.hpp"
#include "scribe/lexicon.hpp"
#include "scribe/microplanner.hpp"
#include "scribe/planner.hpp"
#include "scribe/realizer.hpp"
#include "scribe/selection.hpp"
#include "scribe/usermodel.hpp"

namespace scribe {

struct PipelineConfig {
  SelectionConfig selection;
  MicroplanConfig microplan;
};

struct Description {
  AnnotatedText text;
  bool exhausted = false;
  SelectionResult selection;
  DocumentPlan plan;
  std::vector<ClauseTrace> traces;
};

// Full generation for one request. The session is only updated when the
// whole pipeline succeeds.
Description describe(const KnowledgeBase& kb, const PackSet& packs, SessionState& session,
                     const std::string& entityId, const PipelineConfig& config = {});

// Same as describe, but refuses entities the session has not seen yet.
Description sayMore(const KnowledgeBase& kb, const PackSet& packs, SessionState& session,
                    const std::string& entityId, const PipelineConfig& config = {});

nlohmann::json descriptionToJson(const Description& d);

}  // namespace scribe
