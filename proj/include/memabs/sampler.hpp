#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "memabs/system.hpp"
#include "memabs/word.hpp"

namespace memabs {

struct SampleMeta {
  std::string system_id;
  std::uint64_t seed = 0;
  std::size_t n_trajectories = 0;
  std::size_t word_length = 0;
  int state_dimension = 1;
};

/// A batch of labelled trajectories: one word of word_length letters per
/// trajectory, plus (optionally) the visited states that produced them.
struct SampleSet {
  Alphabet alphabet;
  std::vector<Word> words;
  std::vector<std::vector<State>> states;  // empty unless requested
  SampleMeta meta;

  bool has_states() const { return !states.empty(); }
};

struct SimulateOptions {
  std::size_t max_letters = 100'000'000;  // cap on n_trajectories * word_length
  int threads = 1;                        // 0 = hardware concurrency
};

/// Sample n_trajectories words of word_length letters (word_length - 1 steps
/// per trajectory). Trajectory i draws from the stream (seed, i), so results
/// are bitwise reproducible, independent of scheduling, and the first
/// trajectories are unchanged when n_trajectories grows.
SampleSet simulate(const SystemSpec& system, std::size_t n_trajectories,
                   std::size_t word_length, std::uint64_t seed, bool keep_states = false,
                   const SimulateOptions& options = {});

/// One rendered word per line.
void write_words(const SampleSet& samples, std::ostream& out);

/// Sidecar CSV of visited states: trajectory_id, step, x0[, x1].
void write_states_csv(const SampleSet& samples, std::ostream& out);

}  // namespace memabs
