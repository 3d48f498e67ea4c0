#include "clscad/server.hpp"

#include <ctime>
#include <iomanip>
#include <sstream>

#include <httplib.h>

#include "clscad/error.hpp"
#include "clscad/kinematics.hpp"

namespace clscad {

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "?";
}

namespace {

using Json = nlohmann::json;

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send(res, status, Json{{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaViolation:
    case ErrorCode::AngleCountMismatch:
      return 400;
    case ErrorCode::DuplicateName:
    case ErrorCode::UnknownParent:
    case ErrorCode::WouldCreateCycle:
    case ErrorCode::UnknownNode:
      return 409;
    case ErrorCode::UnknownPart:
      return 404;
    default:
      return 422;
  }
}

void send_error(httplib::Response& res, const Error& e) {
  send_error(res, status_for(e.code()), to_string(e.code()), e.what());
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed JSON body: ") + e.what());
  }
}

std::string iso_time(std::chrono::system_clock::time_point t) {
  if (t.time_since_epoch().count() == 0) return "";
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Wraps a handler so library errors become JSON error responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  return std::stoul(s);
}

}  // namespace

Server::Server(ServerOptions options) : options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  namespace fs = std::filesystem;
  const auto& dir = options_.data_dir;
  if (fs::exists(dir / "taxonomy.json") || fs::is_directory(dir / "taxonomy"))
    catalog_ = std::make_shared<const Catalog>(load_catalog(dir));
  else
    catalog_ = std::make_shared<const Catalog>();

  routes();
  unsigned n = options_.workers ? options_.workers : std::max(1u, std::thread::hardware_concurrency());
  for (unsigned i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Server::~Server() {
  stop();
  {
    std::lock_guard lock(jobs_mu_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

int Server::bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

bool Server::listen_after_bind() { return http_->listen_after_bind(); }

void Server::stop() { http_->stop(); }

std::shared_ptr<const Catalog> Server::catalog() const {
  std::lock_guard lock(state_mu_);
  return catalog_;
}

std::shared_ptr<SynthesisJob> Server::find_job(const std::string& id) const {
  std::lock_guard lock(jobs_mu_);
  auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second;
}

std::optional<JobState> Server::wait_for(const std::string& job_id, std::chrono::milliseconds timeout) {
  std::unique_lock lock(jobs_mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return std::nullopt;
  auto job = it->second;
  jobs_cv_.wait_for(lock, timeout, [&] { return job->state == JobState::Done || job->state == JobState::Failed; });
  return job->state;
}

void Server::worker_loop() {
  while (true) {
    std::shared_ptr<SynthesisJob> job;
    {
      std::unique_lock lock(jobs_mu_);
      jobs_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
      job->state = JobState::Running;
      job->started = std::chrono::system_clock::now();
    }
    run_job(*job);
    jobs_cv_.notify_all();
  }
}

void Server::run_job(SynthesisJob& job) {
  std::vector<CompiledResult> results;
  std::string error;
  try {
    results = run_request(*job.snapshot, job.request);
    if (options_.persist_results && !options_.data_dir.empty())
      write_outputs(options_.data_dir / "jobs" / job.id, results);
  } catch (const std::exception& e) {
    error = e.what();
  }
  std::lock_guard lock(jobs_mu_);
  job.finished = std::chrono::system_clock::now();
  if (error.empty()) {
    job.results = std::move(results);
    job.state = JobState::Done;
  } else {
    job.error = std::move(error);
    job.state = JobState::Failed;
  }
}

void Server::routes() {
  auto& http = *http_;

  // --- taxonomies ---------------------------------------------------------
  http.Get("/taxonomies", guarded([this](const httplib::Request&, httplib::Response& res) {
    send(res, 200, save_taxonomies(catalog()->taxonomy()));
  }));
  http.Get(R"(/taxonomies/([A-Za-z]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Hierarchy h;
    try {
      h = hierarchy_from_string(req.matches[1].str());
    } catch (const Error&) {
      return send_error(res, 404, "NotFound", "no hierarchy " + req.matches[1].str());
    }
    send(res, 200, save_taxonomy(catalog()->taxonomy().taxonomy(h)));
  }));
  http.Put(R"(/taxonomies/([A-Za-z]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Hierarchy h;
    try {
      h = hierarchy_from_string(req.matches[1].str());
    } catch (const Error&) {
      return send_error(res, 404, "NotFound", "no hierarchy " + req.matches[1].str());
    }
    Json body = parse_body(req);
    if (body.is_object() && !body.contains("hierarchy")) body["hierarchy"] = to_string(h);
    Taxonomy t = load_taxonomy(body);
    if (t.hierarchy() != h) throw Error(ErrorCode::SchemaViolation, "body names a different hierarchy");

    std::lock_guard lock(state_mu_);
    auto next = std::make_shared<const Catalog>(catalog_->with_taxonomy(catalog_->taxonomy().with_taxonomy(t)));
    if (!options_.data_dir.empty())
      write_json_file(options_.data_dir / "taxonomy.json", save_taxonomies(next->taxonomy()));
    catalog_ = next;
    send(res, 200, save_taxonomy(t));
  }));

  // --- parts --------------------------------------------------------------
  http.Get("/parts", guarded([this](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& [_, p] : catalog()->parts()) out.push_back(save_part(p));
    send(res, 200, out);
  }));
  http.Get(R"(/parts/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto cat = catalog();
    const Part* p = cat->find(req.matches[1].str());
    if (!p) return send_error(res, 404, "UnknownPart", "no part " + req.matches[1].str());
    send(res, 200, save_part(*p));
  }));
  http.Put(R"(/parts/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Part part = load_part(parse_body(req));
    if (part.part_id != req.matches[1].str())
      throw Error(ErrorCode::SchemaViolation, "partId does not match the path");

    std::lock_guard lock(state_mu_);
    auto diagnostics = validate_part(catalog_->taxonomy(), part);
    std::shared_ptr<const Catalog> next;
    try {
      next = std::make_shared<const Catalog>(catalog_->with_part(part));
    } catch (const Error& e) {
      return send(res, 422, Json{{"error", to_string(e.code())},
                                 {"message", e.what()},
                                 {"diagnostics", diagnostics_to_json(diagnostics)}});
    }
    if (!options_.data_dir.empty())
      write_json_file(options_.data_dir / "parts" / (part.part_id + ".json"), save_part(part));
    catalog_ = next;
    send(res, 200, Json{{"part", save_part(part)}, {"diagnostics", diagnostics_to_json(diagnostics)}});
  }));

  // --- synthesis ----------------------------------------------------------
  http.Post("/requests", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Request request = request_from_json(parse_body(req));
    auto snapshot = catalog();
    validate_request(snapshot->taxonomy(), request, options_.propagated_cap);

    auto job = std::make_shared<SynthesisJob>();
    job->request = std::move(request);
    job->snapshot = std::move(snapshot);
    job->submitted = std::chrono::system_clock::now();
    {
      std::lock_guard lock(jobs_mu_);
      job->id = "job-" + std::to_string(next_job_++);
      jobs_[job->id] = job;
      queue_.push_back(job);
    }
    jobs_cv_.notify_all();
    send(res, 202, Json{{"jobId", job->id}, {"state", "queued"}});
  }));

  http.Get(R"(/jobs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto job = find_job(req.matches[1].str());
    if (!job) return send_error(res, 404, "NotFound", "no job " + req.matches[1].str());
    std::lock_guard lock(jobs_mu_);
    Json out{{"jobId", job->id},
             {"state", to_string(job->state)},
             {"request", request_to_json(job->request)},
             {"submittedAt", iso_time(job->submitted)},
             {"startedAt", iso_time(job->started)},
             {"finishedAt", iso_time(job->finished)}};
    if (job->state == JobState::Done) out["resultCount"] = job->results.size();
    if (job->state == JobState::Failed) out["error"] = job->error;
    send(res, 200, out);
  }));

  // Resolves a finished job or answers with an error.
  auto done_job = [this](const std::string& id, httplib::Response& res) -> std::shared_ptr<SynthesisJob> {
    auto job = find_job(id);
    if (!job) {
      send_error(res, 404, "NotFound", "no job " + id);
      return nullptr;
    }
    std::lock_guard lock(jobs_mu_);
    if (job->state != JobState::Done) {
      send_error(res, 409, "JobNotDone", "job " + id + " is " + std::string(to_string(job->state)));
      return nullptr;
    }
    return job;
  };
  auto result_at = [done_job](const httplib::Request& req, httplib::Response& res) -> const CompiledResult* {
    auto job = done_job(req.matches[1].str(), res);
    if (!job) return nullptr;
    auto i = parse_index(req.matches[2].str());
    if (!i || *i >= job->results.size()) {
      send_error(res, 404, "NotFound", "no result " + req.matches[2].str());
      return nullptr;
    }
    return &job->results[*i];  // results never change after Done
  };

  http.Get(R"(/jobs/([^/]+)/results)", guarded([done_job](const httplib::Request& req, httplib::Response& res) {
    auto job = done_job(req.matches[1].str(), res);
    if (!job) return;
    std::size_t offset = 0, limit = 50;
    if (req.has_param("offset")) {
      auto v = parse_index(req.get_param_value("offset"));
      if (!v) return send_error(res, 400, "BadParameter", "offset");
      offset = *v;
    }
    if (req.has_param("limit")) {
      auto v = parse_index(req.get_param_value("limit"));
      if (!v || *v == 0) return send_error(res, 400, "BadParameter", "limit");
      limit = *v;
    }
    Json items = Json::array();
    for (std::size_t i = offset; i < job->results.size() && i < offset + limit; ++i) {
      const auto& r = job->results[i];
      items.push_back({{"index", i},
                       {"partCount", r.result.part_count},
                       {"totalKnownCost", r.bom.total_known_cost},
                       {"costComplete", r.bom.cost_complete},
                       {"linkCount", r.partition.links.size()},
                       {"dof", dof(r.tree)}});
    }
    send(res, 200, Json{{"jobId", job->id},
                        {"total", job->results.size()},
                        {"offset", offset},
                        {"limit", limit},
                        {"items", items}});
  }));
  http.Get(R"(/jobs/([^/]+)/results/([^/]+)/bom)", guarded([result_at](const httplib::Request& req, httplib::Response& res) {
    if (const auto* r = result_at(req, res)) send(res, 200, bom_to_json(r->bom));
  }));
  http.Get(R"(/jobs/([^/]+)/results/([^/]+)/program)", guarded([result_at](const httplib::Request& req, httplib::Response& res) {
    if (const auto* r = result_at(req, res)) send(res, 200, program_to_json(r->program));
  }));
  http.Get(R"(/jobs/([^/]+)/results/([^/]+)/term)", guarded([result_at](const httplib::Request& req, httplib::Response& res) {
    if (const auto* r = result_at(req, res))
      send(res, 200, Json{{"type", type_to_json(r->result.type)}, {"partCount", r->result.part_count},
                          {"term", term_to_json(r->result.term)}});
  }));

  auto posed = [this](const httplib::Request& req, httplib::Response& res,
                                 const CompiledResult& r) -> std::optional<PosedAssembly> {
    std::vector<double> angles(static_cast<std::size_t>(dof(r.tree)), 0.0);
    if (req.has_param("angles")) angles = parse_angles(req.get_param_value("angles"));
    auto job = find_job(req.matches[1].str());
    try {
      return forward_kinematics(*job->snapshot, r.tree, r.program, angles);
    } catch (const Error& e) {
      send_error(res, e.code() == ErrorCode::AngleCountMismatch ? 400 : status_for(e.code()), to_string(e.code()),
                 e.what());
      return std::nullopt;
    }
  };
  http.Get(R"(/jobs/([^/]+)/results/([^/]+)/scene)", guarded([result_at, posed](const httplib::Request& req, httplib::Response& res) {
    const auto* r = result_at(req, res);
    if (!r) return;
    try {
      if (auto p = posed(req, res, *r)) send(res, 200, export_scene(*p));
    } catch (const Error& e) {
      send_error(res, 400, to_string(e.code()), e.what());
    }
  }));
  http.Get(R"(/jobs/([^/]+)/results/([^/]+)/urdf)", guarded([result_at, posed](const httplib::Request& req, httplib::Response& res) {
    const auto* r = result_at(req, res);
    if (!r) return;
    try {
      if (auto p = posed(req, res, *r)) {
        res.status = 200;
        res.set_content(export_urdf(*p, r->partition), "application/xml");
      }
    } catch (const Error& e) {
      send_error(res, 400, to_string(e.code()), e.what());
    }
  }));
}

}  // namespace clscad
