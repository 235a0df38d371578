#include <stdexcept>

#include "doctest.h"
#include "memabs/alphabet.hpp"
#include "memabs/distribution.hpp"
#include "memabs/rng.hpp"
#include "memabs/word.hpp"

using namespace memabs;

namespace {

Word parse(const Alphabet& alphabet, const std::string& text) { return alphabet.parse(text); }

CategoricalDistribution dist(const Alphabet& alphabet, std::size_t len,
                             std::initializer_list<std::pair<const char*, double>> entries) {
  std::map<Word, double> probs;
  for (const auto& [text, p] : entries) probs.emplace(alphabet.parse(text), p);
  return CategoricalDistribution(len, std::move(probs));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("alphabet is a bijection over indices") {
  Alphabet ab({"a", "b", "c"});
  CHECK(ab.size() == 3);
  CHECK(ab.label(1) == "b");
  CHECK(*ab.index_of("c") == 2);
  CHECK(!ab.index_of("d").has_value());
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({"x y"}), std::invalid_argument);
}

TEST_CASE("word rendering round-trips") {
  Alphabet ab({"a", "b"});
  CHECK(ab.separator() == "");
  Word w = parse(ab, "abba");
  CHECK(w.size() == 4);
  CHECK(ab.render(w) == "abba");

  Alphabet multi({"s0", "s1", "s10"});
  CHECK(multi.separator() == ".");
  Word m = multi.parse("s10.s0.s1");
  CHECK(m.size() == 3);
  CHECK(multi.render(m) == "s10.s0.s1");
  CHECK_THROWS_AS(multi.parse("s10.s7"), std::invalid_argument);

  Alphabet custom({"lo", "hi"}, "-");
  CHECK(custom.render(custom.parse("lo-hi-lo")) == "lo-hi-lo");
  CHECK_THROWS_AS(Alphabet({"lo", "hi"}, ""), std::invalid_argument);
}

TEST_CASE("word ordering is lexicographic and shifts behave") {
  Word ab = Word::of({0, 1});
  Word ba = Word::of({1, 0});
  CHECK(ab < ba);
  CHECK(ab == Word::of({0, 1}));
  CHECK(ab.shifted_append(0) == Word::of({1, 0}));
  CHECK(ab.appended(1) == Word::of({0, 1, 1}));
  CHECK(Word::of({0, 1, 1, 0}).prefix(2) == ab);
  CHECK(Word::of({0, 0, 1, 0}).suffix(2) == Word::of({1, 0}));
}

TEST_CASE("count_subwords matches hand enumeration") {
  Alphabet ab({"a", "b"});

  auto counts = count_subwords(parse(ab, "aaab"), 2);
  CHECK(counts.size() == 2);
  CHECK(counts[parse(ab, "aa")] == 2);
  CHECK(counts[parse(ab, "ab")] == 1);

  counts = count_subwords(parse(ab, "a"), 1);
  CHECK(counts.size() == 1);
  CHECK(counts[parse(ab, "a")] == 1);

  counts = count_subwords(parse(ab, "ababa"), 3);
  CHECK(counts[parse(ab, "aba")] == 2);
  CHECK(counts[parse(ab, "bab")] == 1);
}

TEST_CASE("count_subwords rejects degenerate window sizes") {
  Word w = Word::of({0, 1, 0});
  CHECK_THROWS_AS(count_subwords(w, 0), std::invalid_argument);
  CHECK_THROWS_AS(count_subwords(w, 4), std::invalid_argument);
}

TEST_CASE("count_subwords totals equal the window count") {
  RandomStream rng(99, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> letters;
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_double() * 40);
    for (std::size_t i = 0; i < n; ++i)
      letters.push_back(static_cast<std::uint8_t>(rng.next_double() * 3));
    Word w(std::move(letters));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.next_double() * static_cast<double>(n));
    std::size_t total = 0;
    for (const auto& [sub, count] : count_subwords(w, k)) {
      CHECK(sub.size() == k);
      total += count;
    }
    CHECK(total == w.size() - k + 1);
  }
}

TEST_CASE("distribution validates and prunes") {
  Alphabet ab({"a", "b"});
  auto d = dist(ab, 2, {{"aa", 0.5}, {"ab", 0.5}});
  CHECK(d.support_size() == 2);
  CHECK(d.total_mass() == doctest::Approx(1.0));
  CHECK(d.prob(parse(ab, "aa")) == 0.5);
  CHECK(d.prob(parse(ab, "bb")) == 0.0);

  // dust below the prune threshold is removed
  std::map<Word, double> probs{{parse(ab, "aa"), 1.0 - 1e-13}, {parse(ab, "ab"), 1e-13}};
  CategoricalDistribution pruned(2, std::move(probs));
  CHECK(pruned.support_size() == 1);

  CHECK_THROWS_AS(dist(ab, 2, {{"aa", 0.5}, {"ab", 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(dist(ab, 2, {{"aa", 0.5}, {"b", 0.5}}), std::invalid_argument);
}

TEST_CASE("gap matches hand-computed symmetric-difference masses") {
  Alphabet ab({"a", "b"});
  auto p = dist(ab, 2, {{"aa", 0.5}, {"ab", 0.5}});
  auto q = dist(ab, 2, {{"aa", 1.0}});

  CHECK(total_variation_like_gap(p, p) == 0.0);
  CHECK(total_variation_like_gap(p, q) == doctest::Approx(0.5));

  auto pa = dist(ab, 1, {{"a", 1.0}});
  auto pb = dist(ab, 1, {{"b", 1.0}});
  CHECK(total_variation_like_gap(pa, pb) == 2.0);

  CHECK_THROWS_AS(total_variation_like_gap(p, pa), std::invalid_argument);
}

TEST_CASE("gap is symmetric, bounded, and zero iff supports match") {
  RandomStream rng(7, 1);
  for (int trial = 0; trial < 40; ++trial) {
    auto random_dist = [&](int bits) {
      std::map<Word, double> probs;
      double total = 0.0;
      for (int v = 0; v < 4; ++v) {
        if ((bits >> v) & 1) {
          double mass = 0.1 + rng.next_double();
          probs.emplace(Word::of({v / 2, v % 2}), mass);
          total += mass;
        }
      }
      for (auto& [w, mass] : probs) mass /= total;
      return CategoricalDistribution(2, std::move(probs));
    };
    const int bits_p = 1 + static_cast<int>(rng.next_double() * 15);
    const int bits_q = 1 + static_cast<int>(rng.next_double() * 15);
    auto p = random_dist(bits_p);
    auto q = random_dist(bits_q);
    const double gap = total_variation_like_gap(p, q);
    CHECK(gap == total_variation_like_gap(q, p));
    CHECK(gap >= 0.0);
    CHECK(gap <= 2.0);
    if (bits_p == bits_q) {
      CHECK(gap == 0.0);
    } else {
      CHECK(gap > 0.0);
    }
  }
}

TEST_CASE("random streams are reproducible and index-separated") {
  RandomStream a(123, 5);
  RandomStream b(123, 5);
  RandomStream c(123, 6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) differs = true;
  }
  CHECK(differs);
}

}  // TEST_SUITE
