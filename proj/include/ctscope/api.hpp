#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

namespace ctscope::api {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

using Query = std::map<std::string, std::string>;

/// Read-only view over a completed run. Everything is loaded at construction;
/// handle() never touches the filesystem and is safe to call concurrently.
class ApiService {
 public:
  /// Throws DependencyError listing the missing artifacts.
  explicit ApiService(const std::filesystem::path& artifact_dir);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  Response handle(const std::string& method, const std::string& path, const Query& query = {},
                  const std::string& body = {}) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Background HTTP server wrapping an ApiService.
class Server {
 public:
  explicit Server(const std::filesystem::path& artifact_dir);
  ~Server();
  /// Binds and starts serving on a worker thread; port 0 picks a free port.
  int start(const std::string& host, int port);
  void stop();
  /// Blocking listen on the calling thread.
  void listen(const std::string& host, int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking serve. `bind` is "host:port".
void serve(const std::filesystem::path& artifact_dir, const std::string& bind);

}  // namespace ctscope::api
