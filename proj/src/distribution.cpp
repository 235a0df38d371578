#include "memabs/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace memabs {

CategoricalDistribution::CategoricalDistribution(std::size_t word_length,
                                                 std::map<Word, double> probs,
                                                 double expected_total)
    : word_length_(word_length) {
  double sum = 0.0;
  for (const auto& [word, p] : probs) {
    if (word.size() != word_length)
      throw std::invalid_argument("distribution: support words must share one length");
    if (p < 0.0 || !std::isfinite(p))
      throw std::invalid_argument("distribution: probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - expected_total) > kMassTolerance)
    throw std::invalid_argument("distribution: mass does not sum to the declared total");
  for (auto it = probs.begin(); it != probs.end();) {
    if (it->second < kSupportPrune) {
      it = probs.erase(it);
    } else {
      ++it;
    }
  }
  probs_ = std::move(probs);
  total_ = 0.0;
  for (const auto& [word, p] : probs_) total_ += p;
}

double CategoricalDistribution::prob(const Word& w) const {
  auto it = probs_.find(w);
  return it == probs_.end() ? 0.0 : it->second;
}

double total_variation_like_gap(const CategoricalDistribution& p,
                                const CategoricalDistribution& q) {
  if (p.word_length() != q.word_length())
    throw std::invalid_argument("total_variation_like_gap: word lengths differ");
  double left = 0.0;
  for (const auto& [word, mass] : p.entries()) {
    if (!q.contains(word)) left += mass;
  }
  double right = 0.0;
  for (const auto& [word, mass] : q.entries()) {
    if (!p.contains(word)) right += mass;
  }
  return left + right;
}

}  // namespace memabs
