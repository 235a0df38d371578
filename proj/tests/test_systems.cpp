#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "memabs/system.hpp"

using namespace memabs;

TEST_SUITE("systems") {

TEST_CASE("sturmian step follows the rotation with one wrap") {
  const double theta = kTwoPi * 0.3;
  auto sys = SystemSpec::sturmian(theta);
  RandomStream rng(0, 0);

  CHECK(sys.step({0.0, 0.0}, rng)[0] == theta);
  // 0.9 * 2pi + 0.3 * 2pi wraps to 0.2 * 2pi
  const double wrapped = sys.step({kTwoPi * 0.9, 0.0}, rng)[0];
  CHECK(wrapped == doctest::Approx(kTwoPi * 0.2).epsilon(1e-12));

  CHECK(sys.output({kTwoPi * 0.1, 0.0}) == 0);
  CHECK(sys.output({kTwoPi * 0.5, 0.0}) == 1);
  CHECK(sys.alphabet().size() == 2);

  CHECK_THROWS_AS(SystemSpec::sturmian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::sturmian(kTwoPi), std::invalid_argument);
}

TEST_CASE("sturmian rotation preserves the circle") {
  auto sys = SystemSpec::sturmian();
  RandomStream rng(11, 0);
  State x = sys.sample_initial(rng);
  for (int k = 0; k < 10000; ++k) {
    x = sys.step(x, rng);
    REQUIRE(x[0] >= 0.0);
    REQUIRE(x[0] < kTwoPi);
  }
}

TEST_CASE("deterministic variants are pure functions of the state") {
  auto sturm = SystemSpec::sturmian();
  auto demo = SystemSpec::piecewise_demo();
  RandomStream rng(3, 0);
  for (double x : {0.1, 0.7, 1.2, 1.9}) {
    CHECK(sturm.step({x, 0.0}, rng)[0] == sturm.step({x, 0.0}, rng)[0]);
    CHECK(demo.step({x, 0.0}, rng)[0] == demo.step({x, 0.0}, rng)[0]);
  }
  CHECK(sturm.deterministic());
  CHECK(demo.deterministic());
  CHECK(!SystemSpec::switched_linear().deterministic());
}

TEST_CASE("piecewise demo map hits the stated images") {
  auto sys = SystemSpec::piecewise_demo();
  RandomStream rng(0, 0);
  CHECK(sys.step({1.5, 0.0}, rng)[0] == 0.25);
  CHECK(sys.step({0.25, 0.0}, rng)[0] == 0.25);
  CHECK(sys.step({0.7, 0.0}, rng)[0] == 1.5);
  CHECK(sys.step({1.2, 0.0}, rng)[0] == 1.2);
  CHECK(sys.output({1.5, 0.0}) == *sys.alphabet().index_of("b"));
  CHECK(sys.output({0.3, 0.0}) == *sys.alphabet().index_of("a"));
}

TEST_CASE("initial samples stay inside the declared supports") {
  RandomStream rng(17, 4);

  auto sturm = SystemSpec::sturmian();
  for (int i = 0; i < 200; ++i) {
    State x = sturm.sample_initial(rng);
    CHECK(x[0] >= 0.0);
    CHECK(x[0] < kTwoPi);
  }

  auto sw = SystemSpec::switched_linear();
  for (int i = 0; i < 200; ++i) {
    State x = sw.sample_initial(rng);
    CHECK(x[0] >= -2.0);
    CHECK(x[0] <= 2.0);
    CHECK(x[1] >= -2.0);
    CHECK(x[1] <= 2.0);
  }

  TableDrivenParams table;
  table.rows = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  table.state_labels = {"x", "y", "z"};
  table.initial = {0.0, 0.0, 1.0};  // Dirac on state 3 (index 2)
  auto sys = SystemSpec::table_driven(table);
  for (int i = 0; i < 50; ++i) {
    CHECK(sys.sample_initial(rng)[0] == 2.0);
  }
}

TEST_CASE("switched step applies one of the two modes at the declared rate") {
  auto params = SystemSpec::default_switched_params();
  auto sys = SystemSpec::switched_linear(params);
  RandomStream rng(5, 9);
  State x{1.0, 0.75};
  std::size_t mode1 = 0;
  const std::size_t steps = 100000;
  for (std::size_t k = 0; k < steps; ++k) {
    State next = sys.step(x, rng);
    State via1 = params.a1.apply(x);
    State via2 = params.a2.apply(x);
    const bool is1 = next[0] == via1[0] && next[1] == via1[1];
    const bool is2 = next[0] == via2[0] && next[1] == via2[1];
    REQUIRE((is1 || is2));
    if (is1) ++mode1;
    // keep the state bounded so both images stay distinguishable
    x = {std::fmod(next[0], 2.0) + 0.31, std::fmod(next[1], 2.0) + 0.17};
  }
  const double freq = static_cast<double>(mode1) / static_cast<double>(steps);
  CHECK(std::abs(freq - params.switch_prob) < 0.01);
}

TEST_CASE("switched output partitions by radius and quadrant") {
  auto sys = SystemSpec::switched_linear();
  CHECK(sys.alphabet().size() == 9);
  CHECK(sys.output({0.0, 0.0}) == 0);
  CHECK(sys.output({0.5, -0.5}) == 0);
  CHECK(sys.output({1.5, 0.5}) == 1);
  CHECK(sys.output({-1.5, 0.5}) == 2);
  CHECK(sys.output({-1.0, -1.0}) == 3);
  CHECK(sys.output({1.0, -1.0}) == 4);
  CHECK(sys.output({3.0, 0.0}) == 5);
  CHECK(sys.output({-3.0, 1.0}) == 6);
  CHECK(sys.output({-2.0, -2.0}) == 7);
  CHECK(sys.output({2.5, -0.1}) == 8);
}

TEST_CASE("table rows must be stochastic") {
  TableDrivenParams bad;
  bad.rows = {{0.5, 0.6}, {0.5, 0.5}};
  bad.state_labels = {"a", "b"};
  CHECK_THROWS_AS(SystemSpec::table_driven(bad), std::invalid_argument);

  bad.rows = {{0.5, 0.5}, {0.5, 0.5}};
  bad.state_labels = {"a"};
  CHECK_THROWS_AS(SystemSpec::table_driven(bad), std::invalid_argument);
}

TEST_CASE("same seed reproduces the trajectory bitwise") {
  auto sys = SystemSpec::switched_linear();
  for (std::uint64_t stream : {0ull, 3ull}) {
    RandomStream r1(77, stream), r2(77, stream);
    State a = sys.sample_initial(r1);
    State b = sys.sample_initial(r2);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
    for (int k = 0; k < 500; ++k) {
      a = sys.step(a, r1);
      b = sys.step(b, r2);
      REQUIRE(a[0] == b[0]);
      REQUIRE(a[1] == b[1]);
    }
  }
}

TEST_CASE("dirac initial override is validated") {
  auto sturm = SystemSpec::sturmian();
  RandomStream rng(1, 0);
  auto pinned = sturm.with_initial_point({0.0, 0.0});
  CHECK(pinned.sample_initial(rng)[0] == 0.0);
  CHECK_THROWS_AS(sturm.with_initial_point({kTwoPi, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::piecewise_demo().with_initial_point({2.0, 0.0}),
                  std::invalid_argument);
}

}  // TEST_SUITE
