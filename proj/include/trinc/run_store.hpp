#ifndef TRINC_RUN_STORE_HPP
#define TRINC_RUN_STORE_HPP

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "trinc/scenario_io.hpp"

namespace trinc {

/// One immutable run: the input snapshot it was computed from and its payload.
struct RunRecord {
  std::string id;
  std::string snapshot_hash;
  std::string kind;  ///< sort | select | robustness
  json parameters;
  json payload;
  std::string timestamp;  ///< UTC, ISO 8601; not part of the payload

  [[nodiscard]] json to_json() const;
  static RunRecord from_json(const json& document);
};

/// Snapshot hash of a run input: kind, parameters and the full scenario document.
std::string snapshot_hash(const std::string& kind, const json& parameters, const json& scenario_document);

/// Append-only, file-backed run records (`<dir>/<id>.json`). Run ids are
/// derived from the snapshot hash, so replaying an identical input maps onto
/// the record that already exists.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path directory);

  [[nodiscard]] std::optional<RunRecord> find(const std::string& id) const;
  /// Writes the record unless one with the same id exists; returns the stored record.
  RunRecord put(RunRecord record);

  [[nodiscard]] const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
  mutable std::mutex mutex_;
};

}  // namespace trinc

#endif  // TRINC_RUN_STORE_HPP
