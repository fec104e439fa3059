#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scribe/error.hpp"
#include "scribe/kb.hpp"
#include "scribe/lexicon.hpp"
#include "scribe/pipeline.hpp"

namespace scribe {

enum class AuthorRole { DomainAuthor, ExhibitAuthor };

std::string_view to_string(AuthorRole r);
std::optional<AuthorRole> parseRole(std::string_view s);  // "domain-author" / "exhibit-author"

// One authoring operation. `op` is "<object>.<verb>", e.g. "type.add" or
// "fact.assert"; `target` names the object edited; `payload` carries the
// rest in bundle record syntax.
struct Edit {
  std::string op;
  std::string target;
  nlohmann::json payload = nlohmann::json::object();
};

Edit editFromJson(const nlohmann::json& j);
nlohmann::json editToJson(const Edit& e);

bool isDomainEdit(std::string_view op);
bool isExhibitEdit(std::string_view op);

// Throws PermissionDenied; unknown ops throw InvalidEdit.
void roleCheck(AuthorRole role, const Edit& edit);

struct EditResult {
  bool committed = false;
  KnowledgeBase kb;  // the candidate snapshot; equals the input when rejected
  Diagnostics diagnostics;
  std::optional<ErrorCode> error;  // set when the edit itself threw
  nlohmann::json result = nlohmann::json::object();  // e.g. generated forms, new fact id
};

// Both run the edit on a copy, then validate + alignment + pack checks.
// Nothing with an error-severity diagnostic is ever returned as committed.
EditResult applyDomainEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit);
EditResult applyExhibitEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit);
EditResult applyEdit(const KnowledgeBase& kb, const PackSet& packs, const Edit& edit);

// Every check an edit commit runs, on an existing snapshot.
Diagnostics checkAll(const KnowledgeBase& kb, const PackSet& packs);

struct PreviewRequest {
  std::string entityId;
  std::string language;
  std::string userType;
  std::optional<int> maxFacts;
  std::vector<std::string> simulatedHistory;
};

struct PreviewResult {
  std::optional<Description> description;  // absent when diagnostics has errors
  Diagnostics diagnostics;
};

// The live pipeline on a throwaway session: each history entity is
// described first, then the target.
PreviewResult previewDescription(const KnowledgeBase& kb, const PackSet& packs,
                                 const PreviewRequest& request, const PipelineConfig& config = {});

}  // namespace scribe
