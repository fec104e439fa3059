#include "scribe/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace scribe {

namespace {

template <typename T>
T parseNumber(const char* name, std::string_view text) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw Error(ErrorCode::ParseError, std::string(name) + ": not a number: '" + std::string(text) + "'");
  return value;
}

void checkUnit(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw Error(ErrorCode::ParseError, std::string(name) + " must lie in [0,1]");
}

}  // namespace

ServerConfig configFromJson(const nlohmann::json& j) {
  ServerConfig c;
  c.host = j.value("host", c.host);
  c.port = j.value("port", c.port);
  c.bundlePath = j.value("bundle", c.bundlePath);
  c.packsDir = j.value("packs", c.packsDir);
  c.staticDir = j.value("static", c.staticDir);
  c.sessionsPath = j.value("sessions", c.sessionsPath);
  if (auto it = j.find("tokens"); it != j.end())
    for (const auto& [token, role] : it->items()) {
      auto r = parseRole(role.get<std::string>());
      if (!r) throw Error(ErrorCode::ParseError, "tokens: unknown role '" + role.get<std::string>() + "'");
      c.tokens[token] = *r;
    }
  if (auto it = j.find("selection"); it != j.end()) {
    auto& s = c.pipeline.selection;
    s.theta = it->value("theta", s.theta);
    s.decayLambda = it->value("decayLambda", s.decayLambda);
    s.comparisonFields = it->value("comparisonFields", s.comparisonFields);
  }
  if (auto it = j.find("microplan"); it != j.end())
    c.pipeline.microplan.maxClausesPerSentence =
        it->value("maxClausesPerSentence", c.pipeline.microplan.maxClausesPerSentence);
  checkUnit("selection.theta", c.pipeline.selection.theta);
  checkUnit("selection.decayLambda", c.pipeline.selection.decayLambda);
  if (c.pipeline.microplan.maxClausesPerSentence < 1)
    throw Error(ErrorCode::ParseError, "microplan.maxClausesPerSentence must be at least 1");
  return c;
}

nlohmann::json configToJson(const ServerConfig& c) {
  nlohmann::json tokens = nlohmann::json::object();
  for (const auto& [t, r] : c.tokens) tokens[t] = to_string(r);
  return {{"host", c.host},
          {"port", c.port},
          {"bundle", c.bundlePath},
          {"packs", c.packsDir},
          {"static", c.staticDir},
          {"sessions", c.sessionsPath},
          {"tokens", tokens},
          {"selection",
           {{"theta", c.pipeline.selection.theta},
            {"decayLambda", c.pipeline.selection.decayLambda},
            {"comparisonFields", c.pipeline.selection.comparisonFields}}},
          {"microplan", {{"maxClausesPerSentence", c.pipeline.microplan.maxClausesPerSentence}}}};
}

ServerConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config '" + path.string() + "'");
  try {
    return configFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void applyEnvironment(ServerConfig& config, const EnvLookup& env) {
  if (const char* v = env("PORT")) {
    int port = parseNumber<int>("PORT", v);
    if (port < 0 || port > 65535) throw Error(ErrorCode::ParseError, "PORT out of range");
    config.port = port;
  }
  if (const char* v = env("BUNDLE_PATH")) config.bundlePath = v;
  if (const char* v = env("SELECTION_THETA")) {
    config.pipeline.selection.theta = parseNumber<double>("SELECTION_THETA", v);
    checkUnit("SELECTION_THETA", config.pipeline.selection.theta);
  }
  if (const char* v = env("DECAY_LAMBDA")) {
    config.pipeline.selection.decayLambda = parseNumber<double>("DECAY_LAMBDA", v);
    checkUnit("DECAY_LAMBDA", config.pipeline.selection.decayLambda);
  }
}

void applyEnvironment(ServerConfig& config) {
  applyEnvironment(config, [](const char* name) { return std::getenv(name); });
}

std::filesystem::path packsDirFor(const ServerConfig& config) {
  if (!config.packsDir.empty()) return config.packsDir;
  return std::filesystem::path(config.bundlePath).parent_path() / "packs";
}

}  // namespace scribe
