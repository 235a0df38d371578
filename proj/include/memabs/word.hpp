#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

namespace memabs {

/// A finite sequence of alphabet indices. Equality is letterwise and
/// ordering is lexicographic by index.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {}

  static Word of(std::initializer_list<int> letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  std::uint8_t front() const { return letters_.front(); }
  std::uint8_t back() const { return letters_.back(); }

  Word prefix(std::size_t k) const;
  Word suffix(std::size_t k) const;
  Word subword(std::size_t pos, std::size_t k) const;
  Word appended(std::uint8_t c) const;

  /// Drop the first letter and append c (the memory-window shift).
  Word shifted_append(std::uint8_t c) const;

  void push_back(std::uint8_t c) { letters_.push_back(c); }

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<std::uint8_t> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (std::uint8_t c : w.letters()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Number of (overlapping) occurrences of every length-k word as a
/// contiguous subword of `word`. Counts sum to size(word) - k + 1.
/// Throws std::invalid_argument when k = 0 or k > size(word).
std::map<Word, std::size_t> count_subwords(const Word& word, std::size_t k);

}  // namespace memabs
