#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "memabs/distance.hpp"
#include "memabs/model.hpp"
#include "memabs/system.hpp"

namespace memabs {

struct RefinementConfig {
  SystemSpec system;
  std::size_t n_trajectories = 10'000;
  std::size_t word_length = 60;   // letters per trajectory
  std::size_t horizon = 15;       // comparison horizon, letters
  double threshold = 0.01;        // stop when d_h(previous, current) <= threshold
  int max_memory = 12;
  std::uint64_t seed = 0;
  DistanceMethod method = DistanceMethod::kAuto;
  std::size_t mc_samples = 100'000;
  std::size_t support_cap = kDefaultSupportCap;
  std::size_t max_letters = 100'000'000;
  bool resample_per_level = false;  // true follows the per-iteration resampling literally
  bool report_vs_horizon = true;    // also compare each model against the memory-h model
  bool export_partition = false;
  bool write_samples = false;
  int threads = 1;
  bool verbose = false;
  std::filesystem::path out_dir;  // empty = no artifacts

  explicit RefinementConfig(SystemSpec sys) : system(std::move(sys)) {}
  void validate() const;
};

struct LevelRecord {
  int memory = 0;
  std::optional<double> d_adjacent;  // d_h against the memory+1 model, once built
  std::string method_adjacent;
  std::optional<double> d_vs_horizon;  // d_h against the memory-h model
  std::string method_vs_horizon;
  std::size_t n_states = 0;
  std::size_t n_transitions = 0;
  double wall_ms = 0.0;  // kept out of the on-disk reports (reproducibility)
};

struct RefinementReport {
  std::vector<LevelRecord> levels;  // contiguous from memory 1 to the final memory
  int final_memory = 0;
  std::string termination;  // "threshold" | "max-memory" | "capacity"
  int capacity_memory = 0;  // memory level at which a capacity error struck
  std::string capacity_detail;
};

/// State points harvested from sampled trajectories, each labelled with the
/// trailing memory-length window that led to it.
struct PartitionExport {
  int dimension = 1;
  std::vector<std::pair<State, Word>> points;
};

/// Iterative refinement: build models of increasing memory from one sample
/// set, stop when the adjacent distance drops to the threshold or the memory
/// limit is reached, and write reports/model/partition into out_dir.
RefinementReport run_refinement(const RefinementConfig& config);

PartitionExport export_partition(const SampleSet& samples, int memory);

void write_partition_csv(const PartitionExport& partition, const Alphabet& alphabet,
                         std::ostream& out);
void write_refinement_csv(const RefinementReport& report, std::ostream& out);
std::string refinement_json(const RefinementReport& report, const RefinementConfig& config);

}  // namespace memabs
