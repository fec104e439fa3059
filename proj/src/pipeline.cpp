#include "scribe/pipeline.hpp"

#include "scribe/text.hpp"

namespace scribe {

namespace {

Description run(const KnowledgeBase& kb, const PackSet& packs, SessionState& session,
                const std::string& entityId, const PipelineConfig& config, bool more) {
  const auto& entity = kb.entity(entityId);
  if (entity.generic)
    throw Error(ErrorCode::GenericEntityQueried, "'" + entityId + "' is a generic entity and has no description");
  const auto& pack = packs.get(session.language);

  SessionState work = session;
  decay(work, kb, config.selection.decayLambda);

  Description out;
  out.selection = more ? scribe::sayMore(kb, work, entityId, config.selection)
                       : selectFacts(kb, work, entityId, config.selection);
  if (out.selection.exhausted) {
    out.exhausted = true;
    out.text.text = pack.functionWords.exhaustedMessage;
    if (!out.text.text.empty()) out.text.sentences.push_back({0, text::codePoints(out.text.text)});
    markExpressed(work, entityId, {}, kb);
    session = std::move(work);
    return out;
  }

  out.plan = planDocument(kb, out.selection, work);
  auto specs = microplan(out.plan, session.language, work, kb, config.microplan);
  out.text = realizeDocument(out.plan, specs, pack, kb, registerOf(kb, work), &out.traces);
  markExpressed(work, entityId, out.selection.chosenFacts, kb);
  session = std::move(work);
  return out;
}

}  // namespace

Description describe(const KnowledgeBase& kb, const PackSet& packs, SessionState& session,
                     const std::string& entityId, const PipelineConfig& config) {
  return run(kb, packs, session, entityId, config, false);
}

Description sayMore(const KnowledgeBase& kb, const PackSet& packs, SessionState& session,
                    const std::string& entityId, const PipelineConfig& config) {
  return run(kb, packs, session, entityId, config, true);
}

nlohmann::json descriptionToJson(const Description& d) {
  auto j = annotatedToJson(d.text);
  j["exhausted"] = d.exhausted;
  j["entityId"] = d.selection.entityId;
  j["chosenFacts"] = d.selection.chosenFacts;
  if (d.selection.comparison) {
    const auto& c = *d.selection.comparison;
    j["comparison"] = {{"previousEntity", c.previousEntity}, {"sharedField", c.sharedField}, {"factId", c.factId}};
  }
  return j;
}

}  // namespace scribe
