#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "memabs/refine.hpp"
#include "memabs/system.hpp"

namespace memabs {

/// Raw key-value configuration grouped by [section], with source line
/// numbers for error messages.
struct ParsedConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::string source;

  const Entry* find(const std::string& section, const std::string& key) const;
};

ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Apply a "section.key=value" command-line override.
void apply_override(ParsedConfig& config, const std::string& assignment);

/// Fully-resolved run configuration: the declared system plus sampling,
/// refinement, and output settings.
class RunConfig {
 public:
  static RunConfig load(const std::filesystem::path& path,
                        const std::vector<std::string>& overrides);

  const SystemSpec& system() const { return system_; }

  std::size_t n_trajectories = 10'000;
  std::size_t word_length = 60;
  std::uint64_t seed = 0;
  bool keep_states = false;
  std::size_t max_letters = 100'000'000;

  std::size_t horizon = 15;
  double threshold = 0.01;
  int max_memory = 12;
  DistanceMethod method = DistanceMethod::kAuto;
  std::size_t mc_samples = 100'000;
  std::size_t support_cap = kDefaultSupportCap;
  bool resample_per_level = false;
  bool report_vs_horizon = true;
  bool export_partition = false;
  bool write_samples = false;

  std::filesystem::path out_dir = "run";

  int threads = 1;
  bool verbose = false;

  RefinementConfig to_refinement() const;

  /// Canonical echo of every effective value, written into run directories.
  std::string resolved_text() const;

 private:
  explicit RunConfig(SystemSpec system) : system_(std::move(system)) {}
  SystemSpec system_;
  std::string system_section_text_;
};

DistanceMethod parse_method(const std::string& name);

}  // namespace memabs
