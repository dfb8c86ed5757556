#ifndef TRINC_TESTS_FIXTURES_HPP
#define TRINC_TESTS_FIXTURES_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "trinc/domain.hpp"

namespace trinc::testing {

std::filesystem::path data_dir();
std::filesystem::path source_dir();

/// The bundled case-study scenario, loaded once.
const Scenario& naples();
/// The case study with the second parameter set applied.
const Scenario& naples_second();

/// Published category intervals, written compactly: "3" is C3, "34" is [C3,C4].
std::vector<CategoryInterval> intervals(const std::string& compact);

/// Published weight vectors, criteria g1..g8.
const std::map<std::string, std::vector<double>>& published_weights();

/// Sorted action indices from ids ("a3" -> 2).
std::vector<std::size_t> indices(const Scenario& scenario, const std::vector<std::string>& ids);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace trinc::testing

#endif  // TRINC_TESTS_FIXTURES_HPP
