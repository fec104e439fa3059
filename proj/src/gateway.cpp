#include "scribe/gateway.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "httplib.h"
#include "scribe/bundle.hpp"
#include "scribe/pipeline.hpp"
#include "scribe/realizer.hpp"
#include "scribe/text.hpp"

namespace scribe {

namespace {

using json = nlohmann::json;

HttpResponse ok(json body, int status = 200) { return {status, std::move(body)}; }

HttpResponse fail(int status, std::string_view code, const std::string& message, json diagnostics = nullptr) {
  json body = {{"error", {{"code", code}, {"message", message}}}};
  if (!diagnostics.is_null()) body["diagnostics"] = std::move(diagnostics);
  return {status, std::move(body)};
}

HttpResponse fail(const Error& e) {
  Diagnostics d{{Severity::Error, "", std::string(to_string(e.code())) + ": " + e.what()}};
  return fail(statusFor(e.code()), to_string(e.code()), e.what(), diagnosticsToJson(d));
}

std::vector<std::string> splitPath(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

json parseBody(const HttpRequest& r) {
  if (r.body.empty()) return json::object();
  try {
    return json::parse(r.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("request body: ") + e.what());
  }
}

json sessionPrefs(const SessionState& s) {
  return {{"sessionId", s.sessionId}, {"userType", s.userType}, {"language", s.language},
          {"maxFacts", s.maxFacts},   {"turn", s.turn}};
}

std::string displayName(const KnowledgeBase& kb, const Entity& e, const std::string& lang) {
  if (auto it = e.names.find(lang); it != e.names.end()) return it->second.text;
  if (const auto* lex = kb.lexicon().typeNouns.count(e.typeName) ? &kb.lexicon().typeNouns.at(e.typeName) : nullptr)
    if (!lex->empty())
      if (const auto* n = kb.lexicon().noun(lex->front(), lang)) return text::capitalizeFirst(n->lemma) + " (" + e.id + ")";
  return e.id;
}

}  // namespace

int statusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownEntity:
    case ErrorCode::UnknownType:
    case ErrorCode::UnknownFact:
    case ErrorCode::UnknownField:
    case ErrorCode::UnknownSense:
      return 404;
    case ErrorCode::EntityNotYetDescribed:
    case ErrorCode::EmptySelection:
      return 409;
    case ErrorCode::PermissionDenied:
      return 403;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidEdit:
      return 400;
    default:
      return 422;
  }
}

Gateway::SlotGuard::SlotGuard(Slot& slot) : slot_(slot) {
  std::unique_lock lock(slot_.mutex);
  auto ticket = slot_.nextTicket++;
  slot_.cv.wait(lock, [&] { return slot_.serving == ticket; });
}

Gateway::SlotGuard::~SlotGuard() {
  {
    std::lock_guard lock(slot_.mutex);
    ++slot_.serving;
  }
  slot_.cv.notify_all();
}

Gateway::Gateway(KnowledgeBase kb, PackSet packs, ServerConfig config)
    : kb_(std::make_shared<const KnowledgeBase>(std::move(kb))),
      packs_(std::move(packs)),
      config_(std::move(config)) {
  if (!config_.sessionsPath.empty() && std::filesystem::exists(config_.sessionsPath)) {
    for (auto& s : loadSessions(config_.sessionsPath)) {
      auto slot = std::make_shared<Slot>();
      slot->state = std::move(s);
      sessions_[slot->state.sessionId] = slot;
    }
    sessionCounter_ = sessions_.size();
  }
}

Gateway::~Gateway() { stop(); }

std::shared_ptr<const KnowledgeBase> Gateway::snapshot() const {
  std::lock_guard lock(kbMutex_);
  return kb_;
}

std::vector<SessionState> Gateway::sessions() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(sessionsMutex_);
    for (const auto& [id, slot] : sessions_) slots.push_back(slot);
  }
  std::vector<SessionState> out;
  for (const auto& slot : slots) {
    SlotGuard guard(*slot);
    out.push_back(slot->state);
  }
  return out;
}

std::shared_ptr<Gateway::Slot> Gateway::findSlot(const std::string& id) const {
  std::lock_guard lock(sessionsMutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Gateway::persist() {
  if (config_.sessionsPath.empty()) return;
  std::lock_guard lock(persistMutex_);
  saveSessions(sessions(), config_.sessionsPath);
}

std::optional<AuthorRole> Gateway::roleOf(const HttpRequest& r) const {
  std::string token;
  if (auto it = r.headers.find("authorization"); it != r.headers.end() && it->second.rfind("Bearer ", 0) == 0)
    token = it->second.substr(7);
  else if (auto it2 = r.headers.find("x-role-token"); it2 != r.headers.end())
    token = it2->second;
  if (token.empty()) return std::nullopt;
  auto it = config_.tokens.find(token);
  if (it == config_.tokens.end()) return std::nullopt;
  return it->second;
}

HttpResponse Gateway::handle(const HttpRequest& request) {
  auto parts = splitPath(request.path);
  if (parts.size() < 2 || parts[0] != "api") return fail(404, "NotFound", "no route for " + request.path);
  try {
    return route(request, parts);
  } catch (const Error& e) {
    return fail(e);
  } catch (const json::exception& e) {
    return fail(400, "ParseError", e.what());
  }
}

HttpResponse Gateway::route(const HttpRequest& r, const std::vector<std::string>& p) {
  const auto& m = r.method;
  const auto n = p.size();
  if (n == 2 && p[1] == "health") return ok({{"status", "ok"}});
  if (p[1] == "sessions") {
    if (n == 2 && m == "POST") return createSession(r);
    if (n == 2 && m == "GET") {
      json list = json::array();
      for (const auto& s : sessions()) list.push_back(sessionPrefs(s));
      return ok(list);
    }
    return sessionOp(p, r);
  }
  if (n == 2 && p[1] == "exhibits" && m == "GET") return exhibits(r);
  if (n == 2 && p[1] == "preview" && m == "POST") return preview(r);
  if (n == 2 && p[1] == "undo" && m == "POST") return undo(r);
  if (n == 2 && p[1] == "preview-field" && m == "GET") {
    auto field = r.query.count("field") ? r.query.at("field") : "";
    auto lang = r.query.count("lang") ? r.query.at("lang") : "en";
    if (field.empty()) return fail(400, "ParseError", "query needs 'field'");
    auto kb = snapshot();
    return ok({{"field", field}, {"language", lang}, {"text", previewPhrase(field, lang, *kb, packs_)}});
  }
  if (n == 2 && p[1] == "diagnostics" && m == "GET") {
    auto kb = snapshot();
    return ok({{"diagnostics", diagnosticsToJson(checkAll(*kb, packs_))}});
  }
  if (n == 2 && p[1] == "morph" && m == "GET") {
    auto get = [&](const char* k) { return r.query.count(k) ? r.query.at(k) : std::string(); };
    const auto& pack = packs_.get(get("lang"));
    return ok({{"language", pack.code}, {"lemma", get("lemma")}, {"class", get("class")},
               {"forms", generateForms(get("lemma"), get("class"), pack)}});
  }
  if (n == 2 && p[1] == "bundle" && m == "GET") return ok(bundleToJson(*snapshot()));
  if (n == 2 && p[1] == "languages" && m == "GET") return ok(snapshot()->languages());
  return authoring(r, p);
}

HttpResponse Gateway::createSession(const HttpRequest& r) {
  auto body = parseBody(r);
  auto kb = snapshot();
  SessionOverrides o;
  if (body.contains("maxFacts") && !body["maxFacts"].is_null()) o.maxFacts = body["maxFacts"].get<int>();
  if (o.maxFacts && *o.maxFacts < 1) return fail(422, "InvalidEdit", "maxFacts must be at least 1");
  auto slot = std::make_shared<Slot>();
  {
    std::lock_guard lock(sessionsMutex_);
    o.sessionId = "s" + std::to_string(++sessionCounter_);
    slot->state = newSession(*kb, body.value("userType", std::string("adult")),
                             body.value("language", kb->languages().empty() ? std::string("en") : kb->languages().front()), o);
    if (!packs_.contains(slot->state.language))
      throw Error(ErrorCode::UnknownLanguage, "no language pack for '" + slot->state.language + "'");
    sessions_[slot->state.sessionId] = slot;
  }
  auto prefs = sessionPrefs(slot->state);
  persist();
  return ok(prefs, 201);
}

HttpResponse Gateway::sessionOp(const std::vector<std::string>& p, const HttpRequest& r) {
  if (p.size() < 3) return fail(404, "NotFound", "no route for " + r.path);
  auto slot = findSlot(p[2]);
  if (!slot) return fail(404, "UnknownSession", "no session '" + p[2] + "'");
  HttpResponse out;
  {
    SlotGuard guard(*slot);
    auto& s = slot->state;
    auto kb = snapshot();  // generation runs to completion on this snapshot
    if (p.size() == 3 && r.method == "GET") {
      auto j = sessionToJson(s);
      return ok(j);
    }
    if (p.size() == 3 && r.method == "DELETE") {
      std::lock_guard lock(sessionsMutex_);
      sessions_.erase(p[2]);
      out = ok({{"deleted", p[2]}});
    } else if (p.size() == 3 && r.method == "PATCH") {
      auto body = parseBody(r);
      SessionState next = s;
      if (body.contains("userType")) {
        next.userType = body["userType"].get<std::string>();
        next.maxFacts = kb->userType(next.userType).defaultMaxFacts;
      }
      if (body.contains("language")) {
        next.language = body["language"].get<std::string>();
        if (!kb->languageEnabled(next.language))
          throw Error(ErrorCode::LanguageNotEnabled, "language '" + next.language + "' is not enabled");
        if (!packs_.contains(next.language))
          throw Error(ErrorCode::UnknownLanguage, "no language pack for '" + next.language + "'");
      }
      if (body.contains("maxFacts")) {
        next.maxFacts = body["maxFacts"].get<int>();
        if (next.maxFacts < 1) return fail(422, "InvalidEdit", "maxFacts must be at least 1");
      }
      s = std::move(next);
      out = ok(sessionPrefs(s));
    } else if (p.size() == 5 && r.method == "POST" && (p[3] == "describe" || p[3] == "say-more")) {
      auto d = p[3] == "describe" ? describe(*kb, packs_, s, p[4], config_.pipeline)
                                  : sayMore(*kb, packs_, s, p[4], config_.pipeline);
      auto j = descriptionToJson(d);
      j["language"] = s.language;
      j["sessionId"] = s.sessionId;
      out = ok(j);
    } else {
      return fail(404, "NotFound", "no route for " + r.method + " " + r.path);
    }
  }
  persist();
  return out;
}

HttpResponse Gateway::exhibits(const HttpRequest& r) {
  auto kb = snapshot();
  auto lang = r.query.count("lang") ? r.query.at("lang") : (kb->languages().empty() ? "en" : kb->languages().front());
  bool hasExhibit = kb->findType("exhibit") != nullptr;
  json list = json::array();
  for (const auto& e : kb->entities()) {
    if (e.generic) continue;
    if (hasExhibit && !kb->isSubtype(e.typeName, "exhibit")) continue;
    json item = {{"entityId", e.id}, {"typeName", e.typeName}, {"displayName", displayName(*kb, e, lang)}};
    list.push_back(item);
  }
  return ok(list);
}

HttpResponse Gateway::commit(const HttpRequest& r, const Edit& edit) {
  auto role = roleOf(r);
  if (!role) return fail(401, "Unauthenticated", "authoring needs a role token");
  roleCheck(*role, edit);
  std::lock_guard writer(writerMutex_);
  auto base = snapshot();
  auto result = applyEdit(*base, packs_, edit);
  if (!result.committed) {
    int status = result.error ? statusFor(*result.error) : 422;
    if (status == 400 || status == 404 || status == 403) {
      auto code = to_string(*result.error);
      return fail(status, code, result.diagnostics.front().message, diagnosticsToJson(result.diagnostics));
    }
    return fail(422, "ValidationFailed", "edit rejected", diagnosticsToJson(result.diagnostics));
  }
  {
    std::lock_guard lock(kbMutex_);
    undoStack_.push_back(kb_);
    kb_ = std::make_shared<const KnowledgeBase>(std::move(result.kb));
  }
  if (!config_.bundlePath.empty() && r.query.count("save")) saveBundle(*snapshot(), config_.bundlePath);
  json body = {{"committed", true}, {"edit", editToJson(edit)}, {"diagnostics", diagnosticsToJson(result.diagnostics)}};
  for (const auto& [k, v] : result.result.items()) body[k] = v;
  return ok(body);
}

HttpResponse Gateway::undo(const HttpRequest& r) {
  if (!roleOf(r)) return fail(401, "Unauthenticated", "authoring needs a role token");
  std::lock_guard writer(writerMutex_);
  std::lock_guard lock(kbMutex_);
  if (undoStack_.empty()) return fail(409, "NothingToUndo", "no committed edit to undo");
  kb_ = undoStack_.back();
  undoStack_.pop_back();
  return ok({{"undone", true}, {"remaining", undoStack_.size()}});
}

HttpResponse Gateway::preview(const HttpRequest& r) {
  auto body = parseBody(r);
  auto kb = snapshot();
  PreviewRequest req;
  req.entityId = body.at("entityId").get<std::string>();
  req.language = body.value("language", kb->languages().empty() ? std::string("en") : kb->languages().front());
  req.userType = body.value("userType", std::string("adult"));
  if (body.contains("maxFacts") && !body["maxFacts"].is_null()) req.maxFacts = body["maxFacts"].get<int>();
  req.simulatedHistory = body.value("simulatedHistory", std::vector<std::string>{});
  auto result = previewDescription(*kb, packs_, req, config_.pipeline);
  if (!result.description)
    return fail(422, "PreviewFailed", result.diagnostics.front().message, diagnosticsToJson(result.diagnostics));
  auto j = descriptionToJson(*result.description);
  j["language"] = req.language;
  return ok(j);
}

HttpResponse Gateway::authoring(const HttpRequest& r, const std::vector<std::string>& p) {
  const auto& m = r.method;
  const auto n = p.size();
  const auto& res = p[1];
  auto kb = snapshot();

  if (m == "GET") {
    if (n == 2 && res == "types") {
      json list = json::array();
      for (const auto& t : kb->types()) {
        json fields = json::array();
        for (const auto& f : t.fields) fields.push_back(fieldToJson(f));
        list.push_back({{"name", t.name}, {"parent", t.parent ? json(*t.parent) : json(nullptr)}, {"fields", fields}});
      }
      return ok(list);
    }
    if (n == 2 && res == "entities") {
      json list = json::array();
      for (const auto& e : kb->entities()) list.push_back(entityToJson(e));
      return ok(list);
    }
    if (n == 3 && res == "entities") {
      auto j = entityToJson(kb->entity(p[2]));
      json own = json::array(), effective = json::array();
      for (const auto* f : kb->factsOf(p[2])) own.push_back(factToJson(*f));
      if (!kb->entity(p[2]).generic)
        for (const auto& f : kb->effectiveFacts(p[2])) effective.push_back(factToJson(f));
      j["facts"] = own;
      j["effectiveFacts"] = effective;
      return ok(j);
    }
    if (n == 3 && res == "facts") return ok(factToJson(kb->fact(p[2])));
    if (n == 2 && res == "lexicon") return ok(bundleToJson(*kb).at("lexicon"));
    if (n == 2 && res == "schemas") return ok(bundleToJson(*kb).at("schemas"));
    if (n == 2 && res == "user-types") return ok(bundleToJson(*kb).at("userTypes"));
    if (n == 2 && res == "templates") return ok(bundleToJson(*kb).at("microplans"));
    return fail(404, "NotFound", "no route for GET " + r.path);
  }

  auto body = parseBody(r);
  Edit e;
  if (n == 2 && res == "edits" && m == "POST") {
    e = editFromJson(body);
  } else if (res == "types") {
    if (n == 2 && m == "POST") e = {"type.add", body.value("name", std::string()), body};
    else if (n == 3 && m == "PATCH") e = {"type.rename", p[2], body};
    else if (n == 3 && m == "DELETE") e = {"type.remove", p[2], body};
    else if (n == 4 && p[3] == "fields" && m == "POST") e = {"field.add", p[2], body};
    else if (n == 5 && p[3] == "fields" && m == "PUT") {
      body["name"] = p[4];
      e = {"field.modify", p[2], body};
    } else if (n == 5 && p[3] == "fields" && m == "PATCH") {
      body["from"] = p[4];
      e = {"field.rename", p[2], body};
    }
  } else if (res == "entities") {
    if (n == 2 && m == "POST") e = {"entity.add", "", body};
    else if (n == 3 && m == "DELETE") e = {"entity.remove", p[2], body};
    else if (n == 5 && p[3] == "names" && m == "PUT") {
      body["language"] = p[4];
      e = {"entity.name", p[2], body};
    }
  } else if (res == "facts") {
    if (n == 2 && m == "POST") e = {"fact.assert", "", body};
    else if (n == 3 && m == "DELETE") e = {"fact.retract", p[2], body};
    else if (n == 5 && p[3] == "scores" && m == "PUT") {
      body["userType"] = p[4];
      e = {"scores.set", p[2], body};
    }
  } else if (res == "generics" && n == 3 && m == "PUT") {
    e = {"generic.set", p[2], body};
  } else if (res == "canned") {
    if (n == 2 && m == "POST") e = {"canned.add", "", body};
    else if (n == 3 && m == "DELETE") e = {"canned.remove", p[2], body};
  } else if (res == "lexicon" && n >= 3) {
    const auto& kind = p[2];
    if (kind == "nouns" && n == 3 && m == "POST") {
      auto type = body.value("type", std::string());
      body.erase("type");
      e = {"noun.attach", type, body};
    } else if (kind == "nouns" && n == 4 && m == "DELETE") {
      json payload = json::object();
      if (r.query.count("language")) payload["language"] = r.query.at("language");
      e = {"noun.remove", p[3], payload};
    } else if (kind == "verbs" && n == 3 && m == "POST") {
      e = {"verb.attach", "", body};
    } else if (kind == "adjectives" && n == 3 && m == "POST") {
      e = {"adjective.attach", "", body};
    }
  } else if (res == "schemas" && n == 3) {
    if (m == "PUT") {
      body["type"] = p[2];
      e = {"schema.set", p[2], body};
    } else if (m == "DELETE") {
      e = {"schema.remove", p[2], body};
    }
  } else if (res == "templates") {
    if (n == 4 && m == "PUT") {
      body["language"] = p[3];
      e = {"template.set", p[2], body};
    } else if (n == 2 && m == "POST") {
      e = {"template.add", "", body};
    }
  } else if (res == "user-types" && n == 3 && m == "PUT") {
    body["name"] = p[2];
    e = {"usertype.set", p[2], body};
  } else if (res == "languages" && n == 2 && m == "PUT") {
    e = {"languages.set", "", body};
  }
  if (e.op.empty()) return fail(404, "NotFound", "no route for " + m + " " + r.path);
  return commit(r, e);
}

int Gateway::bind() {
  server_ = std::make_unique<httplib::Server>();
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      r.headers[key] = v;
    }
    for (const auto& [k, v] : req.params) r.query[k] = v;
    auto out = handle(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  };
  const std::string api = R"(/api/.*)";
  server_->Get(api, adapt);
  server_->Post(api, adapt);
  server_->Put(api, adapt);
  server_->Patch(api, adapt);
  server_->Delete(api, adapt);
  if (!config_.staticDir.empty() && std::filesystem::is_directory(config_.staticDir))
    server_->set_mount_point("/", config_.staticDir);
  if (config_.port == 0) return server_->bind_to_any_port(config_.host);
  if (!server_->bind_to_port(config_.host, config_.port)) return -1;
  return config_.port;
}

void Gateway::listen() {
  if (!server_ && bind() < 0) throw Error(ErrorCode::InvalidEdit, "cannot bind port " + std::to_string(config_.port));
  server_->listen_after_bind();
}

void Gateway::stop() {
  if (server_) server_->stop();
}

}  // namespace scribe
