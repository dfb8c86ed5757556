#include "trinc/run_store.hpp"

#include "trinc/hash.hpp"

namespace trinc {

json RunRecord::to_json() const {
  return json{{"id", id},
              {"snapshot_hash", snapshot_hash},
              {"kind", kind},
              {"parameters", parameters},
              {"payload", payload},
              {"timestamp", timestamp}};
}

RunRecord RunRecord::from_json(const json& doc) {
  RunRecord r;
  r.id = doc.at("id").get<std::string>();
  r.snapshot_hash = doc.at("snapshot_hash").get<std::string>();
  r.kind = doc.at("kind").get<std::string>();
  r.parameters = doc.at("parameters");
  r.payload = doc.at("payload");
  r.timestamp = doc.value("timestamp", "");
  return r;
}

std::string snapshot_hash(const std::string& kind, const json& parameters, const json& scenario_document) {
  const json snapshot = {{"kind", kind}, {"parameters", parameters}, {"scenario", scenario_document}};
  return sha256_hex(snapshot.dump());
}

RunStore::RunStore(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::optional<RunRecord> RunStore::find(const std::string& id) const {
  // Ids are hex; anything else cannot name a file we wrote.
  if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) return std::nullopt;
  std::lock_guard lock(mutex_);
  const auto path = directory_ / (id + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  return RunRecord::from_json(json::parse(read_text_file(path)));
}

RunRecord RunStore::put(RunRecord record) {
  if (record.id.empty()) record.id = record.snapshot_hash.substr(0, 16);
  std::lock_guard lock(mutex_);
  const auto path = directory_ / (record.id + ".json");
  if (std::filesystem::exists(path)) return RunRecord::from_json(json::parse(read_text_file(path)));
  const auto tmp = directory_ / (record.id + ".json.tmp");
  write_text_file(tmp, record.to_json().dump(2) + "\n");
  std::filesystem::rename(tmp, path);
  return record;
}

}  // namespace trinc
