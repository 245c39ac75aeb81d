#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <vector>

#include "argus/tools/pipeline.hpp"

namespace httplib {
class Server;
}

namespace argus::tools {

struct ServiceConfig {
  std::optional<std::filesystem::path> state_dir;
  int workers = 0;  // 0 = hardware concurrency
  SolverConfig solver;
  int heartbeat_ms = 1000;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Scenario store and request handlers. Handlers are transport-independent so
// they can be exercised without sockets; mount() wires them to an HTTP server.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response create_scenario(const std::string& body);
  Response riskfield(const std::string& id, const std::optional<std::string>& formation_width);
  // Optional query override of the solver timeout.
  Response plan(const std::string& id, const std::string& body, const std::optional<std::string>& timeout_s);
  // Body: event document plus "plan_id" naming the plan being flown.
  Response event(const std::string& id, const std::string& body);
  Response profile(const std::string& id, const std::string& plan_id);
  Response waypoints(const std::string& id, const std::string& plan_id, const std::optional<std::string>& decimate);

  void mount(httplib::Server& server);
  // Blocks until stop() is called from another thread.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port; returns it, or -1.
  int bind_any(const std::string& host);
  bool listen_after_bind();
  void stop();

  int workers() const noexcept { return workers_; }
  std::size_t scenario_count() const;

 private:
  struct PlanRecord {
    PlanResult result;
    std::vector<ThreatSpec> extra_threats;  // event threats in effect for this plan
  };
  struct Entry {
    std::shared_ptr<const Scenario> scenario;
    // Uploaded document, persisted verbatim so a reload rebuilds identical floats.
    json source;
    std::mutex mutex;
    // Held across snapshot and write so a stale snapshot never lands last.
    std::mutex persist_mutex;
    std::map<std::string, std::shared_ptr<const PlanRecord>> plans;
    int next_plan = 1;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::shared_ptr<const PlanRecord> find_plan(Entry& entry, const std::string& plan_id) const;
  std::string add_plan(Entry& entry, PlanRecord record);
  void persist(const std::string& id, Entry& entry) const;
  void load_state();
  template <class F>
  Response guarded(F&& body);

  ServiceConfig config_;
  int workers_;
  std::counting_semaphore<1024> slots_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> scenarios_;
  int next_scenario_ = 1;
  std::unique_ptr<httplib::Server> server_;
};

// Reads ARGUS_STATE_DIR when `flag` is empty.
std::optional<std::filesystem::path> resolve_state_dir(const std::string& flag);

}  // namespace argus::tools
