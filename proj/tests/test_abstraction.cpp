#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "memabs/errors.hpp"
#include "memabs/model.hpp"

using namespace memabs;

namespace {

// Hand-made sample set over {a,b}; all words must share one length.
SampleSet make_samples(std::initializer_list<const char*> texts) {
  Alphabet alphabet({"a", "b"});
  SampleSet samples{alphabet, {}, {}, {}};
  for (const char* text : texts) samples.words.push_back(alphabet.parse(text));
  samples.meta = SampleMeta{"hand", 0, samples.words.size(), samples.words[0].size(), 1};
  return samples;
}

SystemSpec dense_chain() {
  TableDrivenParams params;
  params.rows = {{0.7, 0.2, 0.1}, {0.3, 0.5, 0.2}, {0.25, 0.25, 0.5}};
  params.state_labels = {"x", "y", "z"};
  return SystemSpec::table_driven(params);
}

}  // namespace

TEST_SUITE("abstraction") {

TEST_CASE("estimation matches the hand-counted windows") {
  auto samples = make_samples({"aaab"});
  auto model = build_model(samples, 1);
  const auto& ab = model.alphabet();

  // windows aa,aa,ab give N_aa=2, N_ab=1 over 3 successor-bearing positions
  CHECK(model.transition_prob(ab.parse("a"), *ab.index_of("a")) == 2.0 / 3.0);
  CHECK(model.transition_prob(ab.parse("a"), *ab.index_of("b")) == 1.0 / 3.0);
  CHECK(model.initial().prob(ab.parse("a")) == 1.0);
  CHECK(model.states().size() == 2);        // 'b' observed only at the end
  CHECK(model.row(ab.parse("b")) == nullptr);  // dead end

  auto model2 = build_model(make_samples({"abab"}), 2);
  CHECK(model2.states() == std::set<Word>{ab.parse("ab"), ab.parse("ba")});
  CHECK(model2.transition_prob(ab.parse("ab"), *ab.index_of("a")) == 1.0);
  CHECK(model2.transition_prob(ab.parse("ba"), *ab.index_of("b")) == 1.0);
  CHECK(model2.initial().prob(ab.parse("ab")) == 1.0);

  for (int memory : {1, 2, 3}) {
    auto self = build_model(make_samples({"aaaa"}), memory);
    CHECK(self.states().size() == 1);
    CHECK(self.transition_prob(*self.states().begin(), 0) == 1.0);
  }
}

TEST_CASE("estimation rejects bad arguments") {
  auto samples = make_samples({"abab"});
  CHECK_THROWS_AS(build_model(samples, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_model(samples, 0), std::invalid_argument);
  SampleSet empty{Alphabet({"a", "b"}), {}, {}, {}};
  CHECK_THROWS_AS(build_model(empty, 1), std::invalid_argument);
}

TEST_CASE("rows are stochastic and shifts structural on sampled models") {
  auto samples = simulate(dense_chain(), 500, 40, 2024);
  for (int memory : {1, 2, 3}) {
    auto model = build_model(samples, memory);
    for (const auto& [state, row] : model.transitions()) {
      double sum = 0.0;
      for (const auto& [letter, p] : row) {
        sum += p;
        CHECK(model.states().count(state.shifted_append(letter)) == 1);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(model.initial().total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("estimator recovers a known chain within binomial error") {
  auto sys = dense_chain();
  auto samples = simulate(sys, 1000, 60, 77);
  auto model = build_model(samples, 1);
  const auto& table = std::get<TableDrivenParams>(sys.params());
  const auto& ab = model.alphabet();

  // pooled successor-bearing window counts per source letter
  std::vector<double> denom(3, 0.0);
  for (const auto& word : samples.words) {
    for (std::size_t k = 0; k + 1 < word.size(); ++k) denom[word[k]] += 1.0;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(denom[i] > 1e4);
    for (std::size_t j = 0; j < 3; ++j) {
      const double p = table.rows[i][j];
      const double estimate =
          model.transition_prob(Word::of({static_cast<int>(i)}), static_cast<std::uint8_t>(j));
      const double sigma = std::sqrt(p * (1.0 - p) / denom[i]);
      CHECK(std::abs(estimate - p) <= 3.0 * sigma);
    }
  }
  (void)ab;
}

TEST_CASE("lift keeps the identity and unrolls prefixes") {
  auto samples = make_samples({"aaab"});
  auto model = build_model(samples, 1);
  const auto& ab = model.alphabet();

  auto same = lift(model, 1);
  CHECK(same.memory() == 1);
  CHECK(same.states() == model.states());

  auto lifted = lift(model, 2);
  CHECK(lifted.memory() == 2);
  CHECK(lifted.states() == std::set<Word>{ab.parse("aa"), ab.parse("ab")});
  CHECK(lifted.initial().prob(ab.parse("aa")) == 2.0 / 3.0);
  CHECK(lifted.initial().prob(ab.parse("ab")) == 1.0 / 3.0);
  CHECK(lifted.transition_prob(ab.parse("aa"), *ab.index_of("a")) == 2.0 / 3.0);
  CHECK(lifted.transition_prob(ab.parse("aa"), *ab.index_of("b")) == 1.0 / 3.0);
  CHECK(lifted.row(ab.parse("ab")) == nullptr);

  auto single = lift(build_model(make_samples({"aaaa"}), 1), 2);
  CHECK(single.states().size() == 1);
  CHECK(single.transition_prob(*single.states().begin(), 0) == 1.0);

  CHECK_THROWS_AS(lift(lifted, 1), std::invalid_argument);
}

TEST_CASE("unroll reproduces the hand-computed branch masses") {
  auto model = build_model(make_samples({"aaab"}), 1);
  const auto& ab = model.alphabet();

  auto behavior = unroll(model, 2);
  CHECK(behavior.distribution.prob(ab.parse("aa")) == 2.0 / 3.0);
  CHECK(behavior.distribution.prob(ab.parse("ab")) == 1.0 / 3.0);
  CHECK(behavior.absorbed == 0.0);

  auto self = unroll(build_model(make_samples({"aaaa"}), 2), 6);
  CHECK(self.distribution.support_size() == 1);
  CHECK(self.distribution.prob(ab.parse("aaaaaa")) == 1.0);

  CHECK_THROWS_AS(unroll(model, 0), std::invalid_argument);
}

TEST_CASE("dead ends absorb instead of renormalizing") {
  // 'ab': state b is observed only at the word end
  auto model = build_model(make_samples({"ab"}), 1);
  auto two = unroll(model, 2);
  CHECK(two.absorbed == 0.0);
  CHECK(two.distribution.support_size() == 1);
  auto three = unroll(model, 3);
  CHECK(three.absorbed == 1.0);
  CHECK(three.distribution.support_size() == 0);
  CHECK(three.distribution.total_mass() == 0.0);
}

TEST_CASE("unroll and lift commute on sampled models") {
  auto sys = dense_chain();
  auto samples = simulate(sys, 300, 20, 5);
  for (int memory : {1, 2}) {
    auto model = build_model(samples, memory);
    for (int extra : {1, 2, 3}) {
      auto lifted = lift(model, memory + extra);
      const std::size_t horizon = static_cast<std::size_t>(memory + extra) + 3;
      auto direct = unroll(model, horizon);
      auto via_lift = unroll(lifted, horizon);
      REQUIRE(direct.distribution.support_size() == via_lift.distribution.support_size());
      CHECK(std::abs(direct.absorbed - via_lift.absorbed) <= 1e-9);
      for (const auto& [word, mass] : direct.distribution.entries()) {
        REQUIRE(std::abs(via_lift.distribution.prob(word) - mass) <= 1e-9);
      }
    }
  }
}

TEST_CASE("at memory L-1 the unrolled support stays inside the sampled words") {
  auto sys = SystemSpec::piecewise_demo();
  auto samples = simulate(sys, 300, 8, 91);
  auto model = build_model(samples, static_cast<int>(samples.meta.word_length) - 1);
  auto behavior = unroll(model, samples.meta.word_length);
  std::set<Word> sampled(samples.words.begin(), samples.words.end());
  for (const auto& [word, mass] : behavior.distribution.entries()) {
    REQUIRE(sampled.count(word) == 1);
  }
}

TEST_CASE("unroll reports capacity instead of thrashing") {
  auto samples = simulate(dense_chain(), 200, 30, 8);
  auto model = build_model(samples, 1);
  CHECK_THROWS_AS(unroll(model, 12, 50), CapacityError);
}

TEST_CASE("model sampling tracks the unroll distribution") {
  auto model = build_model(make_samples({"aaab"}), 1);
  const auto& ab = model.alphabet();

  auto single = sample_model(build_model(make_samples({"aaaa"}), 1), 20, 5, 3);
  for (const auto& word : single.words) CHECK(ab.render(word) == "aaaaa");

  auto words = sample_model(model, 100'000, 2, 99);
  std::size_t n_ab = 0;
  for (const auto& word : words.words) {
    if (ab.render(word) == "ab") ++n_ab;
  }
  const double freq = static_cast<double>(n_ab) / 100'000.0;
  CHECK(std::abs(freq - 1.0 / 3.0) < 0.01);

  auto again = sample_model(model, 500, 2, 99);
  for (std::size_t i = 0; i < 500; ++i) REQUIRE(again.words[i] == words.words[i]);

  auto model2 = build_model(make_samples({"abab"}), 2);
  CHECK_THROWS_AS(sample_model(model2, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("sampling an absorbing model conditions on survival") {
  // from "aab" the branch a->b dies immediately, so surviving 3-letter
  // paths split evenly between aaa and aab
  auto model = build_model(make_samples({"aab"}), 1);
  const auto& ab = model.alphabet();
  auto words = sample_model(model, 20'000, 3, 5);
  std::size_t n_aaa = 0;
  for (const auto& word : words.words) {
    const std::string text = ab.render(word);
    REQUIRE((text == "aaa" || text == "aab"));
    if (text == "aaa") ++n_aaa;
  }
  const double freq = static_cast<double>(n_aaa) / 20'000.0;
  CHECK(std::abs(freq - 0.5) < 0.02);
}

TEST_CASE("serialization round-trips bit-exactly") {
  auto sys = dense_chain();
  auto samples = simulate(sys, 400, 25, 12);
  for (int memory : {1, 3}) {
    auto model = build_model(samples, memory);
    std::ostringstream first;
    write_model(model, first);
    std::istringstream in(first.str());
    auto reloaded = read_model(in);
    std::ostringstream second;
    write_model(reloaded, second);
    REQUIRE(first.str() == second.str());
    CHECK(reloaded.memory() == model.memory());
    CHECK(reloaded.states() == model.states());
    CHECK(reloaded.transition_count() == model.transition_count());
  }

  // lifted models keep their absorbed mass through the file format:
  // from "aab" the path a->b dies before reaching length 3
  auto lifted = lift(build_model(make_samples({"aab"}), 1), 3);
  REQUIRE(lifted.initial_absorbed() == 0.5);
  std::ostringstream first;
  write_model(lifted, first);
  std::istringstream in(first.str());
  auto reloaded = read_model(in);
  CHECK(reloaded.initial_absorbed() == lifted.initial_absorbed());
  std::ostringstream second;
  write_model(reloaded, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("corrupt model files are reported as such") {
  std::istringstream missing("not-a-model\n");
  CHECK_THROWS_AS(read_model(missing), IoError);
  std::istringstream truncated("memory-markov-model 1\nalphabet a b\nmemory 1\nstates 2\n");
  CHECK_THROWS_AS(read_model(truncated), IoError);
}

}  // TEST_SUITE
