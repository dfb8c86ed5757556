/**
 * @file service.hpp
 * @brief HTTP/JSON front end: scenario CRUD with optimistic versioning,
 *        deck weighting, sorting, selection and robustness runs.
 *
 * `Service::handle` is transport independent; `serve` binds it to a socket.
 */

#ifndef TRINC_SERVICE_HPP
#define TRINC_SERVICE_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "trinc/run_store.hpp"
#include "trinc/scenario_io.hpp"

namespace trinc {

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> headers;  ///< lower-case names
};

struct HttpResponse {
  int status = 200;
  json body;
  std::map<std::string, std::string> headers;
};

/// Scenario documents live in `<data>/<id>.json`, runs in `<data>/runs/`.
/// A scenario's version is the SHA-256 of its stored document.
class Service {
 public:
  explicit Service(std::filesystem::path data_directory);

  HttpResponse handle(const HttpRequest& request);

  [[nodiscard]] const std::filesystem::path& data_directory() const { return data_; }

 private:
  HttpResponse list_scenarios();
  HttpResponse create_scenario(const HttpRequest& request);
  HttpResponse get_scenario(const std::string& id);
  HttpResponse put_scenario(const std::string& id, const HttpRequest& request);
  HttpResponse put_srf(const std::string& id, const HttpRequest& request);
  HttpResponse run_sort(const std::string& id, const HttpRequest& request);
  HttpResponse run_select(const std::string& id, const HttpRequest& request);
  HttpResponse run_robustness(const std::string& id, const HttpRequest& request);
  HttpResponse get_run(const std::string& id);

  /// Loads the stored scenario and its version; throws NotFound.
  std::pair<Scenario, std::string> load(const std::string& id) const;
  std::mutex& lock_for(const std::string& id);

  std::filesystem::path data_;
  RunStore runs_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Problem document body ({type, title, status, detail, errors?}).
json problem(int status, const std::string& title, const std::string& detail, json errors = nullptr);

/// Blocks serving HTTP on host:port until the process is stopped.
void serve(Service& service, const std::string& host, int port);

}  // namespace trinc

#endif  // TRINC_SERVICE_HPP
