#include "trinc/service.hpp"

#include <chrono>
#include <ctime>
#include <regex>

#include "httplib.h"
#include "trinc/hash.hpp"
#include "trinc/outranking.hpp"
#include "trinc/portfolio.hpp"
#include "trinc/robustness.hpp"
#include "trinc/srf.hpp"

namespace trinc {

namespace {

struct HttpError : std::runtime_error {
  HttpError(int status, std::string title, const std::string& detail, json errors = nullptr)
      : std::runtime_error(detail), status(status), title(std::move(title)), errors(std::move(errors)) {}
  int status;
  std::string title;
  json errors;
};

HttpError not_found(const std::string& what) { return {404, "Not Found", what + " not found"}; }

json parse_body(const HttpRequest& request) {
  if (request.body.empty()) return json::object();
  try {
    return json::parse(request.body);
  } catch (const json::parse_error& e) {
    throw HttpError(400, "Malformed JSON", "request body: parse error at byte " + std::to_string(e.byte));
  }
}

json report_errors(const ValidationReport& report) {
  json errors = json::array();
  for (const auto& v : report.violations) errors.push_back({{"field", v.where}, {"message", v.message}});
  return errors;
}

bool valid_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9][A-Za-z0-9_.-]*");
  return std::regex_match(id, pattern) && id.find("..") == std::string::npos;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(c)));
    else if (!out.empty() && out.back() != '-') out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "scenario" : out;
}

/// Decodes and validates a scenario document, mapping failures to 400.
Scenario checked_scenario(const json& document) {
  Scenario s;
  try {
    s = scenario_from_json(document);
  } catch (const FormatError& e) {
    throw HttpError(400, "Invalid scenario document", e.what());
  } catch (const ScenarioError& e) {
    throw HttpError(400, "Invalid scenario document", e.what());
  }
  auto report = validate_scenario(s);
  if (!report.ok()) throw HttpError(400, "Scenario does not validate", report.str(), report_errors(report));
  return s;
}

std::string expected_version(const HttpRequest& request, const json& body) {
  if (body.is_object() && body.contains("version") && body["version"].is_string()) return body["version"];
  if (auto it = request.headers.find("if-match"); it != request.headers.end()) {
    std::string v = it->second;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
  }
  return {};
}

HttpResponse run_response(const RunRecord& record, int status = 200) {
  HttpResponse r{status, record.to_json(), {}};
  r.headers["Location"] = "/api/runs/" + record.id;
  return r;
}

}  // namespace

json problem(int status, const std::string& title, const std::string& detail, json errors) {
  json doc = {{"type", "about:blank"}, {"title", title}, {"status", status}, {"detail", detail}};
  if (!errors.is_null()) doc["errors"] = std::move(errors);
  return doc;
}

Service::Service(std::filesystem::path data_directory)
    : data_(std::move(data_directory)), runs_(data_ / "runs") {
  std::filesystem::create_directories(data_ / "runs");
}

std::mutex& Service::lock_for(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::pair<Scenario, std::string> Service::load(const std::string& id) const {
  if (!valid_id(id)) throw not_found("scenario '" + id + "'");
  const auto path = data_ / (id + ".json");
  if (!std::filesystem::is_regular_file(path)) throw not_found("scenario '" + id + "'");
  const auto text = read_text_file(path);
  try {
    return {parse_scenario(text, path.string()), sha256_hex(text)};
  } catch (const std::exception& e) {
    throw HttpError(500, "Stored scenario unreadable", e.what());
  }
}

HttpResponse Service::handle(const HttpRequest& request) {
  static const std::regex scenario_route(R"(^/api/scenarios/([^/]+)$)");
  static const std::regex action_route(R"(^/api/scenarios/([^/]+)/(sort|select|robustness)$)");
  static const std::regex srf_route(R"(^/api/scenarios/([^/]+)/weights/srf$)");
  static const std::regex run_route(R"(^/api/runs/([^/]+)$)");

  std::string path = request.path;
  if (auto q = path.find('?'); q != std::string::npos) path.resize(q);
  if (path.size() > 1 && path.back() == '/') path.pop_back();

  try {
    std::smatch m;
    const auto& method = request.method;
    if (path == "/api/scenarios") {
      if (method == "GET") return list_scenarios();
      if (method == "POST") return create_scenario(request);
    } else if (std::regex_match(path, m, srf_route)) {
      if (method == "PUT") return put_srf(m[1], request);
    } else if (std::regex_match(path, m, action_route)) {
      if (method == "POST") {
        if (m[2] == "sort") return run_sort(m[1], request);
        if (m[2] == "select") return run_select(m[1], request);
        return run_robustness(m[1], request);
      }
    } else if (std::regex_match(path, m, scenario_route)) {
      if (method == "GET") return get_scenario(m[1]);
      if (method == "PUT") return put_scenario(m[1], request);
    } else if (std::regex_match(path, m, run_route)) {
      if (method == "GET") return get_run(m[1]);
    } else {
      throw not_found("resource '" + path + "'");
    }
    throw HttpError(405, "Method Not Allowed", method + " not supported on " + path);
  } catch (const HttpError& e) {
    return {e.status, problem(e.status, e.title, e.what(), e.errors), {}};
  } catch (const FormatError& e) {
    return {400, problem(400, "Invalid input", e.what()), {}};
  } catch (const ScenarioError& e) {
    return {400, problem(400, "Invalid input", e.what()), {}};
  } catch (const std::invalid_argument& e) {
    return {400, problem(400, "Invalid input", e.what()), {}};
  } catch (const json::exception& e) {
    return {400, problem(400, "Invalid input", e.what()), {}};
  } catch (const std::exception& e) {
    return {500, problem(500, "Internal error", e.what()), {}};
  }
}

HttpResponse Service::list_scenarios() {
  json items = json::array();
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(data_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const auto text = read_text_file(file);
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception&) {
      continue;
    }
    if (!doc.is_object() || doc.value("format", "") != kScenarioFormat) continue;
    items.push_back({{"id", file.stem().string()},
                     {"name", doc.value("name", "")},
                     {"version", sha256_hex(text)},
                     {"criteria", doc.contains("criteria") ? doc["criteria"].size() : 0},
                     {"actions", doc.contains("actions") ? doc["actions"].size() : 0}});
  }
  return {200, json{{"scenarios", std::move(items)}}, {}};
}

HttpResponse Service::create_scenario(const HttpRequest& request) {
  json body = parse_body(request);
  json document = body.contains("scenario") ? body["scenario"] : body;
  Scenario s = checked_scenario(document);
  std::string id = body.contains("id") && body["id"].is_string() ? body["id"].get<std::string>() : slug(s.name);
  if (!valid_id(id)) throw HttpError(400, "Invalid id", "scenario id '" + id + "' is not allowed");

  std::lock_guard lock(lock_for(id));
  const auto path = data_ / (id + ".json");
  if (std::filesystem::exists(path)) throw HttpError(409, "Conflict", "scenario '" + id + "' already exists");
  const auto text = dump_scenario(s);
  write_text_file(path, text);
  HttpResponse r{201, json{{"id", id}, {"version", sha256_hex(text)}}, {}};
  r.headers["Location"] = "/api/scenarios/" + id;
  r.headers["ETag"] = "\"" + sha256_hex(text) + "\"";
  return r;
}

HttpResponse Service::get_scenario(const std::string& id) {
  auto [scenario, version] = load(id);
  HttpResponse r{200, json{{"id", id}, {"version", version}, {"scenario", scenario_to_json(scenario)}}, {}};
  r.headers["ETag"] = "\"" + version + "\"";
  return r;
}

HttpResponse Service::put_scenario(const std::string& id, const HttpRequest& request) {
  json body = parse_body(request);
  const std::string expected = expected_version(request, body);
  if (expected.empty()) {
    throw HttpError(428, "Precondition Required", "send the current version (body \"version\" or If-Match)");
  }
  json document = body.contains("scenario") ? body["scenario"] : body;
  // An unwrapped body carries the lock version where the schema version belongs.
  if (document.is_object() && document.contains("version") && document["version"].is_string()) {
    document["version"] = kScenarioVersion;
  }
  Scenario s = checked_scenario(document);

  std::lock_guard lock(lock_for(id));
  auto [current, version] = load(id);
  (void)current;
  if (version != expected) {
    throw HttpError(409, "Version conflict", "scenario '" + id + "' changed since version " + expected,
                    json{{{"field", "version"}, {"message", "current version is " + version}}});
  }
  const auto text = dump_scenario(s);
  write_text_file(data_ / (id + ".json"), text);
  HttpResponse r{200, json{{"id", id}, {"version", sha256_hex(text)}}, {}};
  r.headers["ETag"] = "\"" + sha256_hex(text) + "\"";
  return r;
}

HttpResponse Service::put_srf(const std::string& id, const HttpRequest& request) {
  json body = parse_body(request);
  auto [scenario, version] = load(id);
  std::vector<std::string> ids;
  for (const auto& c : scenario.criteria) ids.push_back(c.id);

  CardDeck deck;
  try {
    deck = deck_from_json(body);
  } catch (const FormatError& e) {
    throw HttpError(400, "Invalid deck", e.what());
  } catch (const ScenarioError& e) {
    throw HttpError(400, "Invalid deck", e.what());
  }
  auto report = validate_deck(deck, ids);
  if (!report.ok()) throw HttpError(400, "Invalid deck", report.str(), report_errors(report));

  const std::string name = body.value("name", "srf");
  const auto weights = compute_srf_weights(deck, ids, name);
  json result = {{"name", name},
                 {"weights", weights_to_json(weights, scenario.criteria)["values"]},
                 {"level_values", srf_level_values(deck)},
                 {"deck", deck_to_json(deck)},
                 {"persisted", false},
                 {"version", version}};

  if (body.value("save", false)) {
    const std::string expected = expected_version(request, body);
    std::lock_guard lock(lock_for(id));
    auto [fresh, current] = load(id);
    if (expected != current) {
      throw HttpError(409, "Version conflict", "scenario '" + id + "' changed since version " + expected,
                      json{{{"field", "version"}, {"message", "current version is " + current}}});
    }
    fresh.decks[name] = deck_to_spec(deck);
    auto it = std::find_if(fresh.weight_vectors.begin(), fresh.weight_vectors.end(),
                           [&](const WeightVector& w) { return w.name() == name; });
    if (it != fresh.weight_vectors.end()) *it = weights;
    else fresh.weight_vectors.push_back(weights);
    const auto text = dump_scenario(fresh);
    write_text_file(data_ / (id + ".json"), text);
    result["persisted"] = true;
    result["version"] = sha256_hex(text);
  }
  return {200, std::move(result), {}};
}

HttpResponse Service::run_sort(const std::string& id, const HttpRequest& request) {
  json body = parse_body(request);
  auto [scenario, version] = load(id);
  (void)version;
  const std::string weights = body.value("weights", "w1");
  const double lambda = body.contains("lambda") ? body["lambda"].get<double>() : scenario.lambda;
  if (!(lambda >= 0.5 && lambda <= 1.0)) {
    throw HttpError(400, "Invalid lambda", "lambda must lie in [0.5, 1]",
                    json{{{"field", "lambda"}, {"message", "must lie in [0.5, 1]"}}});
  }
  (void)scenario.weights(weights);  // 400 on unknown name

  json parameters = {{"scenario", id}, {"weights", weights}, {"lambda", lambda}};
  const json document = scenario_to_json(scenario);
  RunRecord record;
  record.kind = "sort";
  record.snapshot_hash = snapshot_hash(record.kind, parameters, document);
  if (auto existing = runs_.find(record.snapshot_hash.substr(0, 16))) return run_response(*existing);
  record.parameters = std::move(parameters);
  record.payload = assignment_to_json(assign(scenario, weights, lambda));
  record.timestamp = utc_now();
  return run_response(runs_.put(std::move(record)), 201);
}

HttpResponse Service::run_select(const std::string& id, const HttpRequest& request) {
  json body = parse_body(request);
  auto [scenario, version] = load(id);
  (void)version;
  if (!body.contains("budget")) {
    throw HttpError(400, "Missing budget", "budget is required", json{{{"field", "budget"}, {"message", "required"}}});
  }
  const auto& b = body["budget"];
  const BudgetPoint budget =
      resolve_budget(scenario, b.is_string() ? b.get<std::string>() : json(b.get<double>()).dump());
  const std::string profile = body.value("profile", body.value("constraints", "full"));
  if (!scenario.constraint_profiles.contains(profile)) {
    throw HttpError(400, "Unknown constraint profile", "no constraint profile '" + profile + "'",
                    json{{{"field", "profile"}, {"message", "unknown profile"}}});
  }

  std::vector<CategoryInterval> intervals;
  json source;
  if (body.contains("assignment_run")) {
    const std::string run_id = body["assignment_run"];
    auto run = runs_.find(run_id);
    if (!run || run->kind != "sort") throw not_found("assignment run '" + run_id + "'");
    intervals = assignment_from_json(run->payload).intervals();
    source = {{"assignment_run", run_id}};
  } else if (body.contains("reference")) {
    const std::string name = body["reference"];
    auto it = scenario.reference_assignments.find(name);
    if (it == scenario.reference_assignments.end()) throw not_found("reference assignment '" + name + "'");
    intervals = it->second;
    source = {{"reference", name}};
  } else {
    const std::string weights = body.value("weights", "w1");
    const double lambda = body.contains("lambda") ? body["lambda"].get<double>() : scenario.lambda;
    intervals = assign(scenario, weights, lambda).intervals();
    source = {{"weights", weights}, {"lambda", lambda}};
  }
  if (intervals.size() != scenario.actions.size()) {
    throw HttpError(400, "Assignment mismatch", "assignment does not cover the scenario's actions");
  }
  json assignment = json::array();
  for (const auto& iv : intervals) assignment.push_back(iv.str());

  json parameters = {{"scenario", id},
                     {"budget", {{"name", budget.name}, {"amount", budget.amount}}},
                     {"profile", profile},
                     {"source", source},
                     {"assignment", assignment}};
  const json document = scenario_to_json(scenario);
  RunRecord record;
  record.kind = "select";
  record.snapshot_hash = snapshot_hash(record.kind, parameters, document);

  auto respond = [](const RunRecord& r, int fresh_status) {
    if (r.payload.value("infeasible", false)) {
      json doc = problem(422, "Infeasible selection",
                         "no portfolio satisfies the budget and constraint profile");
      doc["unsatisfiable_rows"] = r.payload["unsatisfiable_rows"];
      doc["run_id"] = r.id;
      doc["run"] = r.to_json();
      HttpResponse out{422, std::move(doc), {}};
      out.headers["Location"] = "/api/runs/" + r.id;
      return out;
    }
    return run_response(r, fresh_status);
  };
  if (auto existing = runs_.find(record.snapshot_hash.substr(0, 16))) return respond(*existing, 200);

  const auto ladder = build_ladder(intervals);
  const auto cs = resolve_constraints(scenario, profile, budget.amount);
  const auto solution = solve_certified(ladder, cs);
  record.parameters = std::move(parameters);
  record.payload = solution_to_json(solution, scenario, ladder);
  record.timestamp = utc_now();
  return respond(runs_.put(std::move(record)), 201);
}

HttpResponse Service::run_robustness(const std::string& id, const HttpRequest& request) {
  json body = parse_body(request);
  auto [scenario, version] = load(id);
  (void)version;

  std::vector<std::string> weight_sets;
  if (body.contains("weight_sets")) weight_sets = body["weight_sets"].get<std::vector<std::string>>();
  else for (const auto& w : scenario.weight_vectors) weight_sets.push_back(w.name());
  for (const auto& w : weight_sets) (void)scenario.weights(w);

  std::vector<BudgetPoint> budgets;
  if (body.contains("budgets")) {
    for (const auto& b : body["budgets"]) {
      budgets.push_back(resolve_budget(scenario, b.is_string() ? b.get<std::string>() : json(b.get<double>()).dump()));
    }
  } else {
    for (const auto& [name, amount] : scenario.budgets) budgets.push_back({name, amount});
  }
  std::vector<std::string> profiles = body.contains("profiles") ? body["profiles"].get<std::vector<std::string>>()
                                                                : std::vector<std::string>{"full"};
  RobustnessOptions options;
  const std::string source = body.value("source", "engine");
  if (source == "reference") options.source = AssignmentSource::reference;
  else if (source != "engine") throw HttpError(400, "Invalid source", "source must be \"engine\" or \"reference\"");
  options.lambda = body.contains("lambda") ? body["lambda"].get<double>() : scenario.lambda;

  json budget_list = json::array();
  for (const auto& b : budgets) budget_list.push_back({{"name", b.name}, {"amount", b.amount}});
  json parameters = {{"scenario", id},        {"weight_sets", weight_sets}, {"budgets", budget_list},
                     {"profiles", profiles},  {"source", source},           {"lambda", options.lambda}};
  const json document = scenario_to_json(scenario);
  RunRecord record;
  record.kind = "robustness";
  record.snapshot_hash = snapshot_hash(record.kind, parameters, document);
  if (auto existing = runs_.find(record.snapshot_hash.substr(0, 16))) return run_response(*existing);
  record.parameters = std::move(parameters);
  record.payload = robustness_to_json(robustness_matrix(scenario, weight_sets, budgets, profiles, options), scenario);
  record.timestamp = utc_now();
  return run_response(runs_.put(std::move(record)), 201);
}

HttpResponse Service::get_run(const std::string& id) {
  auto run = runs_.find(id);
  if (!run) throw not_found("run '" + id + "'");
  return run_response(*run);
}

void serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, req.body, {}};
    for (const auto& [name, value] : req.headers) {
      std::string lower;
      for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      request.headers[lower] = value;
    }
    const auto response = service.handle(request);
    res.status = response.status;
    for (const auto& [name, value] : response.headers) res.set_header(name, value);
    res.set_header("Access-Control-Allow-Origin", "*");
    const bool is_problem = response.status >= 400;
    res.set_content(response.body.dump(2), is_problem ? "application/problem+json" : "application/json");
  };
  server.Get(R"(/api/.*)", bridge);
  server.Post(R"(/api/.*)", bridge);
  server.Put(R"(/api/.*)", bridge);
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
    res.status = 204;
  });
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace trinc
