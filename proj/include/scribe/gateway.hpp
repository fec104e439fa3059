#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "scribe/authoring.hpp"
#include "scribe/config.hpp"
#include "scribe/kb.hpp"
#include "scribe/lexicon.hpp"
#include "scribe/usermodel.hpp"

namespace httplib {
class Server;
}

namespace scribe {

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
  std::map<std::string, std::string> query;
};

struct HttpResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

// Transport-independent request handling; serve() puts httplib in front of
// the same handle().
class Gateway {
 public:
  Gateway(KnowledgeBase kb, PackSet packs, ServerConfig config);
  ~Gateway();

  HttpResponse handle(const HttpRequest& request);

  // Binds and returns the bound port (config port 0 picks a free one).
  int bind();
  // Blocks until stop().
  void listen();
  void stop();

  std::shared_ptr<const KnowledgeBase> snapshot() const;
  const PackSet& packs() const { return packs_; }
  std::vector<SessionState> sessions() const;

 private:
  // FIFO ticket lock around one session's state.
  struct Slot {
    std::mutex mutex;
    std::condition_variable cv;
    std::uint64_t nextTicket = 0;
    std::uint64_t serving = 0;
    SessionState state;
  };

  class SlotGuard {
   public:
    explicit SlotGuard(Slot& slot);
    ~SlotGuard();
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

   private:
    Slot& slot_;
  };

  HttpResponse route(const HttpRequest& request, const std::vector<std::string>& parts);
  HttpResponse createSession(const HttpRequest& request);
  HttpResponse sessionOp(const std::vector<std::string>& parts, const HttpRequest& request);
  HttpResponse exhibits(const HttpRequest& request);
  HttpResponse authoring(const HttpRequest& request, const std::vector<std::string>& parts);
  HttpResponse commit(const HttpRequest& request, const Edit& edit);
  HttpResponse preview(const HttpRequest& request);
  HttpResponse undo(const HttpRequest& request);

  std::optional<AuthorRole> roleOf(const HttpRequest& request) const;
  std::shared_ptr<Slot> findSlot(const std::string& id) const;
  void persist();

  std::shared_ptr<const KnowledgeBase> kb_;
  mutable std::mutex kbMutex_;  // guards the kb_ pointer only
  std::mutex writerMutex_;      // one edit at a time
  std::vector<std::shared_ptr<const KnowledgeBase>> undoStack_;

  PackSet packs_;
  ServerConfig config_;

  mutable std::mutex sessionsMutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t sessionCounter_ = 0;
  std::mutex persistMutex_;

  std::unique_ptr<httplib::Server> server_;
};

// Maps an engine error to its HTTP status.
int statusFor(ErrorCode code);

}  // namespace scribe
