#pragma once

#include <cstddef>
#include <map>

#include "memabs/word.hpp"

namespace memabs {

/// Finitely-supported probability distribution over words of one fixed
/// length. Entries below the support prune threshold are removed at
/// construction; remaining probabilities must sum to the declared total
/// (1 unless an absorbed-mass deficit is declared) within tolerance.
class CategoricalDistribution {
 public:
  static constexpr double kSupportPrune = 1e-12;
  static constexpr double kMassTolerance = 1e-9;

  CategoricalDistribution() = default;
  CategoricalDistribution(std::size_t word_length, std::map<Word, double> probs,
                          double expected_total = 1.0);

  std::size_t word_length() const { return word_length_; }
  std::size_t support_size() const { return probs_.size(); }
  double total_mass() const { return total_; }

  /// Probability of `w`, zero when outside the support.
  double prob(const Word& w) const;
  bool contains(const Word& w) const { return probs_.count(w) > 0; }
  const std::map<Word, double>& entries() const { return probs_; }

 private:
  std::map<Word, double> probs_;
  std::size_t word_length_ = 0;
  double total_ = 0.0;
};

/// Sum of the two one-sided symmetric-difference masses,
/// p(supp p \ supp q) + q(supp q \ supp p), in [0,2].
/// Throws std::invalid_argument on mismatched word lengths.
double total_variation_like_gap(const CategoricalDistribution& p,
                                const CategoricalDistribution& q);

}  // namespace memabs
