#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scribe/authoring.hpp"
#include "scribe/bundle.hpp"
#include "scribe/config.hpp"
#include "scribe/gateway.hpp"
#include "scribe/pipeline.hpp"
#include "scribe/realizer.hpp"

namespace fs = std::filesystem;
using namespace scribe;

namespace {

fs::path packsFor(const std::string& bundle, const std::string& override) {
  if (!override.empty()) return override;
  return fs::path(bundle).parent_path() / "packs";
}

void printDiagnostics(const Diagnostics& diags, std::ostream& out) {
  for (const auto& d : diags) out << to_string(d.severity) << " " << d.location << ": " << d.message << "\n";
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int runValidate(const std::string& bundle, const std::string& packsDir) {
  auto kb = loadBundle(bundle);
  auto packs = loadPacks(packsFor(bundle, packsDir), kb.languages());
  auto diags = checkAll(kb, packs);
  printDiagnostics(diags, std::cout);
  if (has_errors(diags)) return 1;
  std::cout << "ok: " << kb.types().size() << " types, " << kb.entities().size() << " entities, "
            << kb.facts().size() << " facts\n";
  return 0;
}

int runSimulate(const std::string& bundle, const std::string& packsDir, const std::string& script,
                std::string userType, std::string lang, std::optional<int> maxFacts, const PipelineConfig& config) {
  auto kb = loadBundle(bundle);
  auto packs = loadPacks(packsFor(bundle, packsDir), kb.languages());
  std::ifstream in(script);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open script '" + script + "'");
  auto session = newSession(kb, userType, lang, SessionOverrides{maxFacts, "simulated"});
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream words(line);
    std::string cmd, arg;
    words >> cmd >> arg;
    if (cmd.empty() || cmd[0] == '#') continue;
    std::cout << "> " << cmd << (arg.empty() ? "" : " " + arg) << "\n";
    if (cmd == "describe" || cmd == "say-more") {
      auto d = cmd == "describe" ? describe(kb, packs, session, arg, config) : sayMore(kb, packs, session, arg, config);
      std::cout << d.text.text << "\n";
    } else if (cmd == "language") {
      if (!kb.languageEnabled(arg)) throw Error(ErrorCode::LanguageNotEnabled, "language '" + arg + "' is not enabled");
      packs.get(arg);
      session.language = arg;
    } else if (cmd == "user-type") {
      session.maxFacts = kb.userType(arg).defaultMaxFacts;
      session.userType = arg;
    } else if (cmd == "max-facts") {
      session.maxFacts = std::stoi(arg);
    } else {
      throw Error(ErrorCode::ParseError, script + ":" + std::to_string(lineNo) + ": unknown command '" + cmd + "'");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scribe: multilingual exhibit descriptions"};
  app.require_subcommand(1);
  std::string packsDir;
  app.add_option("--packs", packsDir, "language pack directory (default: <bundle dir>/packs)");

  PipelineConfig pipeline;
  app.add_option("--theta", pipeline.selection.theta, "assimilation exclusion threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--decay", pipeline.selection.decayLambda, "assimilation decay per turn")->check(CLI::Range(0.0, 1.0));

  std::string bundle;

  auto* validateCmd = app.add_subcommand("validate", "check a bundle against its packs");
  validateCmd->add_option("bundle", bundle)->required();

  auto* generate = app.add_subcommand("generate", "describe one exhibit");
  std::string entity, lang = "en", userType = "adult", history;
  std::optional<int> maxFacts;
  bool asJson = false;
  generate->add_option("bundle", bundle)->required();
  generate->add_option("--entity", entity)->required();
  generate->add_option("--lang", lang);
  generate->add_option("--user-type", userType);
  generate->add_option("--max-facts", maxFacts)->check(CLI::PositiveNumber);
  generate->add_option("--history", history, "entities described first, comma-separated");
  generate->add_flag("--json", asJson, "print the annotated text as JSON");

  auto* morph = app.add_subcommand("morph", "print the generated forms of a lemma");
  std::string pack, lemma, cls;
  morph->add_option("pack", pack, "pack code or path")->required();
  morph->add_option("lemma", lemma)->required();
  morph->add_option("class", cls)->required();

  auto* previewField = app.add_subcommand("preview-field", "one clause for a field");
  std::string field;
  previewField->add_option("bundle", bundle)->required();
  previewField->add_option("field", field)->required();
  previewField->add_option("--lang", lang);

  auto* serve = app.add_subcommand("serve", "run the HTTP gateway");
  std::string configPath, staticDir, sessionsPath;
  int port = -1;
  serve->add_option("bundle", bundle);
  serve->add_option("--port", port);
  serve->add_option("--config", configPath);
  serve->add_option("--static", staticDir);
  serve->add_option("--sessions", sessionsPath);

  auto* simulate = app.add_subcommand("simulate", "replay a scripted session");
  std::string script;
  simulate->add_option("bundle", bundle)->required();
  simulate->add_option("--script", script)->required();
  simulate->add_option("--lang", lang);
  simulate->add_option("--user-type", userType);
  simulate->add_option("--max-facts", maxFacts)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validateCmd) return runValidate(bundle, packsDir);

    if (*generate) {
      auto kb = loadBundle(bundle);
      auto packs = loadPacks(packsFor(bundle, packsDir), kb.languages());
      PreviewRequest req{entity, lang, userType, maxFacts, splitList(history)};
      auto result = previewDescription(kb, packs, req, pipeline);
      if (!result.description) {
        printDiagnostics(result.diagnostics, std::cerr);
        return 1;
      }
      if (asJson) std::cout << descriptionToJson(*result.description).dump(2) << "\n";
      else std::cout << result.description->text.text << "\n";
      return 0;
    }

    if (*morph) {
      fs::path path = pack;
      if (!fs::exists(path)) path = fs::path(packsDir.empty() ? SCRIBE_DATA_DIR "/packs" : packsDir) / (pack + ".json");
      auto p = loadPack(path);
      for (const auto& [cell, form] : generateForms(lemma, cls, p)) std::cout << cell << "\t" << form << "\n";
      return 0;
    }

    if (*previewField) {
      auto kb = loadBundle(bundle);
      auto packs = loadPacks(packsFor(bundle, packsDir), kb.languages());
      std::cout << previewPhrase(field, lang, kb, packs) << "\n";
      return 0;
    }

    if (*serve) {
      ServerConfig cfg = configPath.empty() ? ServerConfig{} : loadConfig(configPath);
      if (!configPath.empty()) pipeline = cfg.pipeline;
      cfg.pipeline = pipeline;
      applyEnvironment(cfg);
      if (!bundle.empty()) cfg.bundlePath = bundle;
      if (port >= 0) cfg.port = port;
      if (!staticDir.empty()) cfg.staticDir = staticDir;
      if (!sessionsPath.empty()) cfg.sessionsPath = sessionsPath;
      if (!packsDir.empty()) cfg.packsDir = packsDir;
      if (cfg.bundlePath.empty()) throw Error(ErrorCode::ParseError, "no bundle given (argument, config or BUNDLE_PATH)");
      auto kb = loadBundle(cfg.bundlePath);
      auto diags = checkAll(kb, loadPacks(packsDirFor(cfg), kb.languages()));
      if (has_errors(diags)) {
        printDiagnostics(diags, std::cerr);
        return 1;
      }
      auto packs = loadPacks(packsDirFor(cfg), kb.languages());
      Gateway gateway(std::move(kb), std::move(packs), cfg);
      int bound = gateway.bind();
      if (bound < 0) throw Error(ErrorCode::InvalidEdit, "cannot bind port " + std::to_string(cfg.port));
      std::cerr << "listening on " << cfg.host << ":" << bound << "\n";
      gateway.listen();
      return 0;
    }

    if (*simulate) return runSimulate(bundle, packsDir, script, userType, lang, maxFacts, pipeline);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
