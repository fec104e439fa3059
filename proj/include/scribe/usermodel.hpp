#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scribe/kb.hpp"

namespace scribe {

struct HistoryRecord {
  std::string entityId;
  int turn = 0;
  std::vector<std::string> factIds;

  bool operator==(const HistoryRecord&) const = default;
};

struct SessionState {
  std::string sessionId;
  std::string userType;
  std::string language;
  int maxFacts = 1;
  int turn = 0;
  // touched items only; everything else sits at its base value
  std::map<std::string, double> assimilation;
  std::vector<HistoryRecord> history;
  // "gender.number" -> entity, from the last sentence of the last description
  std::map<std::string, std::string> discourse;
  std::map<std::string, int> variationCounters;  // field -> next template index

  bool operator==(const SessionState&) const = default;
};

struct SessionOverrides {
  std::optional<int> maxFacts;
  std::string sessionId;
};

SessionState newSession(const KnowledgeBase& kb, const std::string& userType,
                        const std::string& language, const SessionOverrides& overrides = {});

// Base assimilation of a fact, canned paragraph or type-intro id for a user
// type. Throws UnknownFact.
double baseAssimilation(const KnowledgeBase& kb, std::string_view userType, std::string_view id);

double assimilationOf(const SessionState& session, std::string_view id, const KnowledgeBase& kb);

// Sets every listed item to 1.0, advances the turn and appends a history
// record for `entityId`.
void markExpressed(SessionState& session, const std::string& entityId,
                   const std::vector<std::string>& ids, const KnowledgeBase& kb);

// One turn of decay toward base: a <- base + (a - base)(1 - lambda).
void decay(SessionState& session, const KnowledgeBase& kb, double lambda);

// Most recent first.
std::vector<HistoryRecord> previouslySeen(const SessionState& session);
bool hasDescribed(const SessionState& session, std::string_view entityId);

nlohmann::json sessionToJson(const SessionState& s);
SessionState sessionFromJson(const nlohmann::json& j);

// sessions.json sidecar next to the bundle.
void saveSessions(const std::vector<SessionState>& sessions, const std::filesystem::path& path);
std::vector<SessionState> loadSessions(const std::filesystem::path& path);

}  // namespace scribe
