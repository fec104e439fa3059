#include "scribe/usermodel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace scribe {

using nlohmann::json;

SessionState newSession(const KnowledgeBase& kb, const std::string& userType,
                        const std::string& language, const SessionOverrides& overrides) {
  const auto& ut = kb.userType(userType);
  if (!kb.languageEnabled(language))
    throw Error(ErrorCode::LanguageNotEnabled, "language '" + language + "' is not enabled");
  SessionState s;
  s.sessionId = overrides.sessionId;
  s.userType = userType;
  s.language = language;
  s.maxFacts = overrides.maxFacts.value_or(ut.defaultMaxFacts);
  if (s.maxFacts < 1) throw Error(ErrorCode::InvalidEdit, "maxFacts must be at least 1");
  return s;
}

double baseAssimilation(const KnowledgeBase& kb, std::string_view userType, std::string_view id) {
  if (isTypeIntroId(id)) {
    auto owner = id.substr(id.find(':') + 1);
    if (!kb.findEntity(owner)) throw Error(ErrorCode::UnknownFact, "unknown fact '" + std::string(id) + "'");
    return 0.0;
  }
  if (const auto* f = kb.findFact(id)) return kb.scoresFor(f->scores, userType).baseAssimilation;
  if (const auto* c = kb.findCanned(id)) return kb.scoresFor(c->scores, userType).baseAssimilation;
  throw Error(ErrorCode::UnknownFact, "unknown fact '" + std::string(id) + "'");
}

double assimilationOf(const SessionState& session, std::string_view id, const KnowledgeBase& kb) {
  double base = baseAssimilation(kb, session.userType, id);
  auto it = session.assimilation.find(std::string(id));
  return it == session.assimilation.end() ? base : it->second;
}

void markExpressed(SessionState& session, const std::string& entityId,
                   const std::vector<std::string>& ids, const KnowledgeBase& kb) {
  for (const auto& id : ids) (void)baseAssimilation(kb, session.userType, id);
  for (const auto& id : ids) session.assimilation[id] = 1.0;
  session.turn += 1;
  session.history.push_back({entityId, session.turn, ids});
}

void decay(SessionState& session, const KnowledgeBase& kb, double lambda) {
  if (lambda <= 0.0) return;
  lambda = std::min(lambda, 1.0);
  for (auto& [id, a] : session.assimilation) {
    double base;
    try {
      base = baseAssimilation(kb, session.userType, id);
    } catch (const Error&) {
      continue;  // retracted since it was expressed
    }
    a = base + (a - base) * (1.0 - lambda);
  }
}

std::vector<HistoryRecord> previouslySeen(const SessionState& session) {
  return {session.history.rbegin(), session.history.rend()};
}

bool hasDescribed(const SessionState& session, std::string_view entityId) {
  return std::any_of(session.history.begin(), session.history.end(),
                     [&](const HistoryRecord& r) { return r.entityId == entityId; });
}

json sessionToJson(const SessionState& s) {
  json history = json::array();
  for (const auto& r : s.history)
    history.push_back({{"entityId", r.entityId}, {"turn", r.turn}, {"factIds", r.factIds}});
  return json{{"sessionId", s.sessionId},
              {"userType", s.userType},
              {"language", s.language},
              {"maxFacts", s.maxFacts},
              {"turn", s.turn},
              {"assimilation", s.assimilation},
              {"history", history},
              {"discourse", s.discourse},
              {"variationCounters", s.variationCounters}};
}

SessionState sessionFromJson(const json& j) {
  try {
    SessionState s;
    s.sessionId = j.at("sessionId").get<std::string>();
    s.userType = j.at("userType").get<std::string>();
    s.language = j.at("language").get<std::string>();
    s.maxFacts = j.at("maxFacts").get<int>();
    s.turn = j.value("turn", 0);
    s.assimilation = j.value("assimilation", std::map<std::string, double>{});
    for (const auto& r : j.value("history", json::array()))
      s.history.push_back({r.at("entityId").get<std::string>(), r.at("turn").get<int>(),
                           r.value("factIds", std::vector<std::string>{})});
    s.discourse = j.value("discourse", std::map<std::string, std::string>{});
    s.variationCounters = j.value("variationCounters", std::map<std::string, int>{});
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("session: ") + e.what());
  }
}

void saveSessions(const std::vector<SessionState>& sessions, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& s : sessions) arr.push_back(sessionToJson(s));
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + tmp.string());
    out << json{{"sessions", arr}}.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::vector<SessionState> loadSessions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  std::vector<SessionState> out;
  for (const auto& j : doc.value("sessions", json::array())) out.push_back(sessionFromJson(j));
  return out;
}

}  // namespace scribe
