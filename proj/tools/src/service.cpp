#include "argus/tools/service.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>

#include <httplib.h>

#include "argus/io.hpp"
#include "argus/waypoints.hpp"

namespace argus::tools {
namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

double parse_number(const std::string& text, const char* field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(field, "expected a number, got '" + text + "'");
  }
}

int resolve_workers(int requested) {
  if (requested > 0) return std::min(requested, 1024);
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<ThreatSpec> with_extra(const Scenario& s, const std::vector<ThreatSpec>& extra) {
  std::vector<ThreatSpec> all = s.threats;
  all.insert(all.end(), extra.begin(), extra.end());
  return all;
}

std::optional<std::string> query(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

void write(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

std::optional<std::filesystem::path> resolve_state_dir(const std::string& flag) {
  if (!flag.empty()) return std::filesystem::path(flag);
  if (const char* env = std::getenv("ARGUS_STATE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)), workers_(resolve_workers(config_.workers)), slots_(workers_) {
  if (config_.state_dir) {
    std::filesystem::create_directories(*config_.state_dir);
    load_state();
  }
}

Service::~Service() = default;

template <class F>
Response Service::guarded(F&& body) {
  try {
    return body();
  } catch (...) {
    const ErrorInfo info = classify(std::current_exception());
    return {http_status(info.kind), io::dump(error_body(info))};
  }
}

std::size_t Service::scenario_count() const {
  std::shared_lock lock(mutex_);
  return scenarios_.size();
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = scenarios_.find(id);
  if (it == scenarios_.end()) throw NotFoundError("unknown scenario '" + id + "'");
  return it->second;
}

std::shared_ptr<const Service::PlanRecord> Service::find_plan(Entry& entry, const std::string& plan_id) const {
  std::lock_guard lock(entry.mutex);
  auto it = entry.plans.find(plan_id);
  if (it == entry.plans.end()) throw NotFoundError("unknown plan '" + plan_id + "'");
  return it->second;
}

std::string Service::add_plan(Entry& entry, PlanRecord record) {
  std::lock_guard lock(entry.mutex);
  const std::string id = "p" + std::to_string(entry.next_plan++);
  entry.plans.emplace(id, std::make_shared<const PlanRecord>(std::move(record)));
  return id;
}

void Service::persist(const std::string& id, Entry& entry) const {
  if (!config_.state_dir) return;
  std::lock_guard persist_lock(entry.persist_mutex);
  json plans = json::object();
  int next_plan = 0;
  {
    std::lock_guard lock(entry.mutex);
    for (const auto& [pid, rec] : entry.plans) {
      plans[pid] = json{{"result", io::result_to_json(rec->result)},
                        {"extra_threats", io::threats_to_json(rec->extra_threats)}};
    }
    next_plan = entry.next_plan;
  }
  const json doc{{"id", id}, {"scenario", entry.source}, {"plans", plans},
                 {"next_plan", next_plan}};
  const auto target = *config_.state_dir / (id + ".json");
  auto tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  io::write_text_file(tmp, io::dump(doc));
  std::filesystem::rename(tmp, target);
}

void Service::load_state() {
  for (const auto& file : std::filesystem::directory_iterator(*config_.state_dir)) {
    if (file.path().extension() != ".json") continue;
    const json doc = io::read_json_file(file.path());
    const std::string id = doc.at("id").get<std::string>();
    auto entry = std::make_shared<Entry>();
    entry->source = doc.at("scenario");
    entry->scenario = std::make_shared<const Scenario>(scenario_from_json(entry->source));
    for (const auto& [pid, rec] : doc.at("plans").items()) {
      PlanRecord r{io::result_from_json(rec.at("result")), io::threats_from_json(rec.at("extra_threats"))};
      for (auto& t : r.extra_threats) t.normalize(entry->scenario->grid.geometry);
      entry->plans.emplace(pid, std::make_shared<const PlanRecord>(std::move(r)));
    }
    entry->next_plan = doc.value("next_plan", static_cast<int>(entry->plans.size()) + 1);
    if (id.size() > 1 && id[0] == 's') {
      next_scenario_ = std::max(next_scenario_, std::atoi(id.c_str() + 1) + 1);
    }
    scenarios_.emplace(id, std::move(entry));
  }
}

Response Service::create_scenario(const std::string& body) {
  return guarded([&] {
    auto entry = std::make_shared<Entry>();
    entry->source = io::parse_json(body, "scenario");
    entry->scenario = std::make_shared<const Scenario>(scenario_from_json(entry->source));
    std::string id;
    {
      std::unique_lock lock(mutex_);
      id = "s" + std::to_string(next_scenario_++);
      scenarios_.emplace(id, entry);
    }
    persist(id, *entry);
    const auto& g = entry->scenario->grid;
    return Response{201, io::dump(json{{"scenario_id", id},
                                       {"rows", g.rows()},
                                       {"cols", g.cols()},
                                       {"nodes", entry->scenario->graph.node_count()},
                                       {"threats", entry->scenario->threats.size()}})};
  });
}

Response Service::riskfield(const std::string& id, const std::optional<std::string>& formation_width) {
  return guarded([&] {
    auto entry = find(id);
    const double width = formation_width ? parse_number(*formation_width, "formation_width") : 0.0;
    if (!(width >= 0.0)) throw ValidationError("formation_width", "must be >= 0");
    return Response{200, io::dump(riskfield_output(*entry->scenario, width))};
  });
}

Response Service::plan(const std::string& id, const std::string& body, const std::optional<std::string>& timeout_s) {
  return guarded([&] {
    auto entry = find(id);
    const json j = io::parse_json(body, "request");
    const MissionRequest request = io::mission_from_json(j);
    SolverConfig cfg = config_.solver;
    if (timeout_s) cfg.timeout_s = parse_number(*timeout_s, "timeout_s");
    cfg.validate();
    PlanResult result;
    {
      SlotGuard slot(slots_);
      result = run_plan(*entry->scenario, request, cfg);
    }
    const json out = io::result_to_json(result);
    const std::string pid = add_plan(*entry, {std::move(result), {}});
    persist(id, *entry);
    return Response{200, io::dump(json{{"plan_id", pid}, {"result", out}})};
  });
}

Response Service::event(const std::string& id, const std::string& body) {
  return guarded([&] {
    auto entry = find(id);
    const json j = io::parse_json(body, "event");
    if (!j.is_object() || !j.contains("plan_id") || !j["plan_id"].is_string()) {
      throw ValidationError("plan_id", "event must name the plan being flown");
    }
    const auto record = find_plan(*entry, j["plan_id"].get<std::string>());
    DynamicEvent ev = io::event_from_json(j);
    Scenario flown = *entry->scenario;
    flown.threats = with_extra(flown, record->extra_threats);
    ComparisonReport report;
    {
      SlotGuard slot(slots_);
      report = run_patch(flown, record->result, ev, config_.solver);
    }
    json out = patch_output(report);
    PlanRecord next{report.patch.plan, record->extra_threats};
    for (auto t : ev.new_threats) {
      t.normalize(flown.grid.geometry);
      next.extra_threats.push_back(std::move(t));
    }
    const std::string pid = add_plan(*entry, std::move(next));
    persist(id, *entry);
    json wrapped{{"plan_id", pid}};
    wrapped.update(out);
    return Response{200, io::dump(wrapped)};
  });
}

Response Service::profile(const std::string& id, const std::string& plan_id) {
  return guarded([&] {
    auto entry = find(id);
    const auto record = find_plan(*entry, plan_id);
    const Scenario& s = *entry->scenario;
    const auto threats = with_extra(s, record->extra_threats);
    const CostGraph graph =
        apply_risk(s.graph, build_risk_field(s.grid.geometry, threats, record->result.request.formation_width_m));
    json j = io::profile_to_json(graph, record->result);
    j["plan_id"] = plan_id;
    return Response{200, io::dump(j)};
  });
}

Response Service::waypoints(const std::string& id, const std::string& plan_id,
                            const std::optional<std::string>& decimate) {
  return guarded([&] {
    auto entry = find(id);
    const auto record = find_plan(*entry, plan_id);
    int k = 1;
    if (decimate) {
      const double v = parse_number(*decimate, "decimate");
      if (v < 1.0 || v != static_cast<int>(v)) throw ValidationError("decimate", "must be a positive integer");
      k = static_cast<int>(v);
    }
    return Response{200, export_waypoints(entry->scenario->grid, record->result.path, k), "text/plain"};
  });
}

void Service::mount(httplib::Server& server) {
  server.Post("/scenario", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, create_scenario(req.body));
  });
  server.Get(R"(/scenario/([^/]+)/riskfield)", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, riskfield(req.matches[1], query(req, "formation_width")));
  });
  server.Post(R"(/scenario/([^/]+)/plan)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto timeout = query(req, "timeout_s");
    if (query(req, "stream").value_or("0") != "1") {
      write(res, plan(id, req.body, timeout));
      return;
    }
    // Heartbeat mode: whitespace is written while the solve runs, then the
    // JSON body. The status line is always 200; errors carry "status".
    auto pending = std::make_shared<std::future<Response>>(
        std::async(std::launch::async, [this, id, body = req.body, timeout] { return plan(id, body, timeout); }));
    const auto beat = std::chrono::milliseconds(config_.heartbeat_ms);
    res.set_chunked_content_provider("application/json", [pending, beat](std::size_t, httplib::DataSink& sink) {
      while (pending->wait_for(beat) != std::future_status::ready) {
        if (!sink.write(" ", 1)) return false;
      }
      const Response r = pending->get();
      sink.write(r.body.data(), r.body.size());
      sink.done();
      return true;
    });
  });
  server.Post(R"(/scenario/([^/]+)/event)", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, event(req.matches[1], req.body));
  });
  server.Get(R"(/scenario/([^/]+)/profile)", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, profile(req.matches[1], query(req, "plan").value_or("")));
  });
  server.Get(R"(/scenario/([^/]+)/waypoints)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string pid = query(req, "plan").value_or("");
    Response r = waypoints(req.matches[1], pid, query(req, "decimate"));
    write(res, r);
    if (r.status == 200) res.set_header("Content-Disposition", "attachment; filename=\"" + pid + ".waypoints\"");
  });
}

namespace {

std::unique_ptr<httplib::Server> make_server(int workers) {
  auto server = std::make_unique<httplib::Server>();
  // Extra threads so heartbeat streams and cheap GETs are not starved by solves.
  const auto threads = static_cast<std::size_t>(workers) + 8;
  server->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  return server;
}

}  // namespace

bool Service::listen(const std::string& host, int port) {
  if (!server_) {
    server_ = make_server(workers_);
    mount(*server_);
  }
  return server_->listen(host, port);
}

int Service::bind_any(const std::string& host) {
  if (!server_) {
    server_ = make_server(workers_);
    mount(*server_);
  }
  return server_->bind_to_any_port(host);
}

bool Service::listen_after_bind() { return server_ && server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace argus::tools
