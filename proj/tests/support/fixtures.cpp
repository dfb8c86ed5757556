#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <random>

#include "trinc/scenario_io.hpp"

namespace trinc::testing {

std::filesystem::path data_dir() { return TRINC_TEST_DATA_DIR; }
std::filesystem::path source_dir() { return TRINC_SOURCE_DIR; }

const Scenario& naples() {
  static const Scenario s = load_scenario(data_dir() / "naples.json");
  return s;
}

const Scenario& naples_second() {
  static const Scenario s = load_scenario(data_dir() / "naples_second_parameters.json");
  return s;
}

std::vector<CategoryInterval> intervals(const std::string& compact) {
  std::vector<CategoryInterval> out;
  std::size_t pos = 0;
  while (pos < compact.size()) {
    if (compact[pos] == ' ') {
      ++pos;
      continue;
    }
    auto end = compact.find(' ', pos);
    if (end == std::string::npos) end = compact.size();
    const auto token = compact.substr(pos, end - pos);
    const int lo = token.front() - '0';
    const int hi = token.back() - '0';
    out.push_back({lo, hi});
    pos = end;
  }
  return out;
}

const std::map<std::string, std::vector<double>>& published_weights() {
  static const std::map<std::string, std::vector<double>> w = {
      {"w1", {20, 8, 14, 8, 2, 17, 14, 17}},
      {"w2", {22.7, 6.4, 14.5, 10.5, 2.3, 18.6, 6.4, 18.6}},
      {"w3", {13.4, 18.3, 6.1, 18.3, 6.1, 18.3, 13.4, 6.1}},
      {"w4", {11.3, 11.3, 16.1, 16.1, 1.6, 11.3, 16.1, 16.1}},
      {"w5", {4.3, 14.7, 11.2, 11.2, 11.2, 21.5, 7.8, 18.1}},
      {"w6", {20.8, 6.3, 16.6, 4.2, 18.7, 12.5, 16.7, 6.1}},
  };
  return w;
}

std::vector<std::size_t> indices(const Scenario& scenario, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(scenario.action_index(id));
  std::sort(out.begin(), out.end());
  return out;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("trinc-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace trinc::testing
