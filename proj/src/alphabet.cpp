#include "memabs/alphabet.hpp"

#include <set>
#include <stdexcept>

namespace memabs {

namespace {

void check_label(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("alphabet: empty label");
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\n' || c == ',' || c == '.' || c == '#') {
      throw std::invalid_argument("alphabet: label '" + label +
                                  "' contains a reserved character");
    }
  }
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> labels) {
  bool single_chars = true;
  for (const auto& label : labels) {
    if (label.size() != 1) single_chars = false;
  }
  *this = Alphabet(std::move(labels), single_chars ? "" : ".");
}

Alphabet::Alphabet(std::vector<std::string> labels, std::string separator)
    : labels_(std::move(labels)), separator_(std::move(separator)) {
  if (labels_.empty()) throw std::invalid_argument("alphabet: needs at least one label");
  if (labels_.size() > 256) throw std::invalid_argument("alphabet: more than 256 labels");
  std::set<std::string> seen;
  bool single_chars = true;
  for (const auto& label : labels_) {
    check_label(label);
    if (!seen.insert(label).second)
      throw std::invalid_argument("alphabet: duplicate label '" + label + "'");
    if (label.size() != 1) single_chars = false;
  }
  if (separator_.empty() && !single_chars)
    throw std::invalid_argument(
        "alphabet: multi-character labels need a nonempty separator");
  for (const auto& label : labels_) {
    if (!separator_.empty() && label.find(separator_) != std::string::npos)
      throw std::invalid_argument("alphabet: label '" + label + "' contains the separator");
  }
}

const std::string& Alphabet::label(std::uint8_t index) const {
  if (index >= labels_.size()) throw std::invalid_argument("alphabet: label index out of range");
  return labels_[index];
}

std::optional<std::uint8_t> Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<std::uint8_t>(i);
  }
  return std::nullopt;
}

std::string Alphabet::render(const Word& word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out += separator_;
    out += label(word[i]);
  }
  return out;
}

Word Alphabet::parse(std::string_view text) const {
  std::vector<std::uint8_t> letters;
  if (separator_.empty()) {
    for (char c : text) {
      auto idx = index_of(std::string_view(&c, 1));
      if (!idx) throw std::invalid_argument(std::string("alphabet: unknown letter '") + c + "'");
      letters.push_back(*idx);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t next = text.find(separator_, pos);
      std::string_view piece =
          next == std::string_view::npos ? text.substr(pos) : text.substr(pos, next - pos);
      if (piece.empty() && text.empty()) break;  // empty word
      auto idx = index_of(piece);
      if (!idx)
        throw std::invalid_argument("alphabet: unknown letter '" + std::string(piece) + "'");
      letters.push_back(*idx);
      if (next == std::string_view::npos) break;
      pos = next + separator_.size();
    }
  }
  return Word(std::move(letters));
}

}  // namespace memabs
