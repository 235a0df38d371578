#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memabs/word.hpp"

namespace memabs {

/// Ordered set of distinct output labels; the label/index mapping is a
/// bijection over 0..size-1. Words render as concatenated labels joined by
/// the separator, which defaults to none when every label is a single
/// character and "." otherwise.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels);
  Alphabet(std::vector<std::string> labels, std::string separator);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::uint8_t index) const;
  std::optional<std::uint8_t> index_of(std::string_view label) const;
  const std::string& separator() const { return separator_; }

  std::string render(const Word& word) const;
  Word parse(std::string_view text) const;

  bool operator==(const Alphabet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::string separator_;
};

}  // namespace memabs
