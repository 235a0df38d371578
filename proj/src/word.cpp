#include "memabs/word.hpp"

#include <stdexcept>

namespace memabs {

Word Word::of(std::initializer_list<int> letters) {
  std::vector<std::uint8_t> v;
  v.reserve(letters.size());
  for (int c : letters) v.push_back(static_cast<std::uint8_t>(c));
  return Word(std::move(v));
}

Word Word::prefix(std::size_t k) const { return subword(0, k); }

Word Word::suffix(std::size_t k) const { return subword(letters_.size() - k, k); }

Word Word::subword(std::size_t pos, std::size_t k) const {
  return Word(std::vector<std::uint8_t>(letters_.begin() + pos, letters_.begin() + pos + k));
}

Word Word::appended(std::uint8_t c) const {
  std::vector<std::uint8_t> v;
  v.reserve(letters_.size() + 1);
  v.assign(letters_.begin(), letters_.end());
  v.push_back(c);
  return Word(std::move(v));
}

Word Word::shifted_append(std::uint8_t c) const {
  std::vector<std::uint8_t> v;
  v.reserve(letters_.size());
  v.assign(letters_.begin() + 1, letters_.end());
  v.push_back(c);
  return Word(std::move(v));
}

std::map<Word, std::size_t> count_subwords(const Word& word, std::size_t k) {
  if (k == 0) throw std::invalid_argument("count_subwords: k must be positive");
  if (k > word.size())
    throw std::invalid_argument("count_subwords: k exceeds the word length");
  std::map<Word, std::size_t> counts;
  for (std::size_t pos = 0; pos + k <= word.size(); ++pos) {
    ++counts[word.subword(pos, k)];
  }
  return counts;
}

}  // namespace memabs
