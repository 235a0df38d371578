#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memabs/model.hpp"

namespace memabs {

enum class DistanceMethod { kExact, kMonteCarlo, kAuto };

struct DistanceOptions {
  DistanceMethod method = DistanceMethod::kExact;
  std::size_t mc_samples = 100'000;
  std::size_t support_cap = kDefaultSupportCap;
  std::uint64_t mc_seed = 0x6d656d616273ull;
  int threads = 1;  // 0 = hardware concurrency
};

/// Behavioural distance at one horizon: d = left + right, where left is the
/// mass the first behaviour puts on words the second cannot produce and
/// right is the symmetric term. Memory 0 marks a fixed reference behaviour
/// rather than a model.
struct DistanceReport {
  std::size_t horizon = 0;
  int memory1 = 0;
  int memory2 = 0;
  double d = 0.0;
  double left = 0.0;
  double right = 0.0;
  std::string method;  // "exact" or "monte-carlo(N)"
  std::size_t support1 = 0;
  std::size_t support2 = 0;
  double absorbed1 = 0.0;
  double absorbed2 = 0.0;
};

/// Word-set membership structure with shared-prefix compression.
class PrefixTrie {
 public:
  void insert(const Word& word);
  bool contains(const Word& word) const;
  std::size_t word_count() const { return words_; }

 private:
  struct Node {
    std::map<std::uint8_t, std::size_t> children;
    bool terminal = false;
  };
  std::vector<Node> nodes_ = {Node{}};
  std::size_t words_ = 0;
};

/// Empirical distribution of the horizon-letter prefixes of the samples.
BehaviorDistribution empirical_behavior(const SampleSet& samples,
                                        std::size_t horizon_letters);

DistanceReport distance(const MemoryMarkovModel& m1, const MemoryMarkovModel& m2,
                        std::size_t horizon_letters, const DistanceOptions& options = {});
DistanceReport distance(const MemoryMarkovModel& m1, const BehaviorDistribution& b2,
                        std::size_t horizon_letters, const DistanceOptions& options = {});
DistanceReport distance(const BehaviorDistribution& b1, const MemoryMarkovModel& m2,
                        std::size_t horizon_letters, const DistanceOptions& options = {});
DistanceReport distance(const BehaviorDistribution& b1, const BehaviorDistribution& b2,
                        std::size_t horizon_letters, const DistanceOptions& options = {});

/// One-sided mass of the model's behaviour outside the reference's support.
double spurious_mass(const MemoryMarkovModel& model, const MemoryMarkovModel& reference,
                     std::size_t horizon_letters, const DistanceOptions& options = {});
double spurious_mass(const MemoryMarkovModel& model, const BehaviorDistribution& reference,
                     std::size_t horizon_letters, const DistanceOptions& options = {});

/// Build the memory-h model from the samples and compare its h-letter
/// behaviour against the empirical h-prefix behaviour of the same samples;
/// both one-sided terms must come out exactly zero.
DistanceReport support_identity_check(const SampleSet& samples, std::size_t horizon_letters,
                                  const DistanceOptions& options = {});

std::string distance_csv_header();
std::string distance_csv_row(const DistanceReport& report);
std::string distance_json(const DistanceReport& report);

}  // namespace memabs
