#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "json.hpp"
#include "scribe/authoring.hpp"
#include "scribe/pipeline.hpp"

namespace scribe {

struct ServerConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string bundlePath;
  std::string packsDir;      // empty: <bundle dir>/packs
  std::string staticDir;     // webapp build output; empty disables static serving
  std::string sessionsPath;  // empty: sessions live in memory only
  std::map<std::string, AuthorRole> tokens;  // bearer token -> role
  PipelineConfig pipeline;
};

ServerConfig configFromJson(const nlohmann::json& j);
nlohmann::json configToJson(const ServerConfig& c);
ServerConfig loadConfig(const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;

// PORT, BUNDLE_PATH, SELECTION_THETA, DECAY_LAMBDA. Malformed values throw
// ParseError naming the variable.
void applyEnvironment(ServerConfig& config, const EnvLookup& env);
void applyEnvironment(ServerConfig& config);

std::filesystem::path packsDirFor(const ServerConfig& config);

}  // namespace scribe
