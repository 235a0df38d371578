#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "memabs/alphabet.hpp"
#include "memabs/distribution.hpp"
#include "memabs/rng.hpp"
#include "memabs/sampler.hpp"

namespace memabs {

inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

struct ModelProvenance {
  std::string system_id;
  std::uint64_t seed = 0;
  std::size_t n_trajectories = 0;
  std::size_t word_length = 0;
};

/// A memory-L Markov model: states are length-L words, and a transition on
/// letter c moves from state y to shift-left(y)+c. Transitions are stored
/// sparsely per state as (letter, probability) pairs ordered by letter, so
/// the shift relation holds structurally; targets must be states. States
/// observed without successors (dead ends) carry no row.
class MemoryMarkovModel {
 public:
  using Row = std::vector<std::pair<std::uint8_t, double>>;

  MemoryMarkovModel(Alphabet alphabet, int memory, std::set<Word> states,
                    std::map<Word, Row> transitions, CategoricalDistribution initial,
                    double initial_absorbed = 0.0, ModelProvenance provenance = {});

  const Alphabet& alphabet() const { return alphabet_; }
  int memory() const { return memory_; }
  const std::set<Word>& states() const { return states_; }
  const std::map<Word, Row>& transitions() const { return transitions_; }
  const CategoricalDistribution& initial() const { return initial_; }

  /// Mass of behaviours shorter than the memory; nonzero only for lifts of
  /// models whose paths can die before reaching the target memory.
  double initial_absorbed() const { return initial_absorbed_; }

  const ModelProvenance& provenance() const { return provenance_; }

  /// Transition row of `state`, or nullptr for dead ends.
  const Row* row(const Word& state) const;
  double transition_prob(const Word& state, std::uint8_t letter) const;
  std::size_t transition_count() const;

  /// True when the model assigns positive probability to `word`
  /// (size >= memory required).
  bool supports_word(const Word& word) const;

 private:
  Alphabet alphabet_;
  int memory_;
  std::set<Word> states_;
  std::map<Word, Row> transitions_;
  CategoricalDistribution initial_;
  double initial_absorbed_;
  ModelProvenance provenance_;
};

/// Exact distribution over fixed-length words together with the probability
/// mass that reached a dead-end state before the horizon. The two parts sum
/// to one; absorbed mass is reported, never silently renormalized.
struct BehaviorDistribution {
  CategoricalDistribution distribution;
  double absorbed = 0.0;

  std::size_t word_length() const { return distribution.word_length(); }
};

/// Estimate a memory-`memory` model from samples: transition probabilities
/// are ratios of overlapping subword counts pooled over all sampled words
/// (occurrences at a word's final window carry no successor and are excluded
/// from the denominator, so rows sum to one exactly); the initial
/// distribution is the empirical distribution of memory-long prefixes.
MemoryMarkovModel build_model(const SampleSet& samples, int memory);

/// Re-express the model at a larger memory without changing its behaviour:
/// states are the reachable target-length words, the transition out of a
/// state is that of its memory-long suffix, and the initial distribution is
/// the original unrolled forward to the target length.
MemoryMarkovModel lift(const MemoryMarkovModel& model, int target_memory,
                       std::size_t state_cap = kDefaultSupportCap);

/// Exact horizon-letter behaviour distribution by breadth-first expansion in
/// lexicographic order. Throws CapacityError when the support would exceed
/// support_cap (use sample_model / the Monte-Carlo distance instead).
BehaviorDistribution unroll(const MemoryMarkovModel& model, std::size_t horizon_letters,
                            std::size_t support_cap = kDefaultSupportCap);

/// One path draw of horizon_letters letters; nullopt when the path reaches a
/// dead end (or an initial-mass deficit) before the horizon.
std::optional<Word> try_sample_path(const MemoryMarkovModel& model,
                                    std::size_t horizon_letters, RandomStream& rng);

/// I.i.d. words from the unroll distribution conditioned on non-absorption,
/// one stream per word.
SampleSet sample_model(const MemoryMarkovModel& model, std::size_t n_words,
                       std::size_t horizon_letters, std::uint64_t seed);

// Text serialization; probabilities carry 17 significant digits and files
// round-trip bit-exactly.
void write_model(const MemoryMarkovModel& model, std::ostream& out);
MemoryMarkovModel read_model(std::istream& in);
void write_model_file(const MemoryMarkovModel& model, const std::filesystem::path& path);
MemoryMarkovModel read_model_file(const std::filesystem::path& path);

}  // namespace memabs
