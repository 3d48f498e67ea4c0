#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "clscad/catalog.hpp"
#include "clscad/pipeline.hpp"
#include "clscad/synthesis.hpp"

namespace httplib {
class Server;
}

namespace clscad {

enum class JobState { Queued, Running, Done, Failed };
std::string_view to_string(JobState s);

struct SynthesisJob {
  std::string id;
  Request request;
  std::shared_ptr<const Catalog> snapshot;
  JobState state = JobState::Queued;
  std::string error;
  std::vector<CompiledResult> results;  // immutable once state == Done
  std::chrono::system_clock::time_point submitted, started, finished;
};

struct ServerOptions {
  std::filesystem::path data_dir;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::size_t propagated_cap = kDefaultPropagatedCap;
  bool persist_results = true;  // write <data>/jobs/<id>/...
};

/// HTTP/JSON front end over the catalog, taxonomies and synthesis jobs.
/// Writes to the catalog or taxonomies are serialized and persisted to the
/// data directory; each job works on the snapshot taken at submission.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Returns the bound port (or -1).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();

  std::shared_ptr<const Catalog> catalog() const;
  // Blocks until the job is done or failed, or the timeout passes.
  std::optional<JobState> wait_for(const std::string& job_id, std::chrono::milliseconds timeout);

 private:
  void routes();
  void worker_loop();
  void run_job(SynthesisJob& job);
  std::shared_ptr<SynthesisJob> find_job(const std::string& id) const;

  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;

  mutable std::mutex state_mu_;  // catalog + taxonomy writes
  std::shared_ptr<const Catalog> catalog_;

  mutable std::mutex jobs_mu_;
  std::condition_variable jobs_cv_;
  std::map<std::string, std::shared_ptr<SynthesisJob>> jobs_;
  std::deque<std::shared_ptr<SynthesisJob>> queue_;
  std::size_t next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace clscad
