#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "memabs/alphabet.hpp"
#include "memabs/rng.hpp"

namespace memabs {

/// Concrete system state; only the first dimension() coordinates are
/// meaningful. Table-driven systems store the state index in x[0].
using State = std::array<double, 2>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Row-major 2x2 matrix.
struct Mat2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  State apply(const State& x) const {
    return {m00 * x[0] + m01 * x[1], m10 * x[0] + m11 * x[1]};
  }
};

/// Rotation on [0, 2pi) by an (intended irrational) angle, output 0 on
/// [0, theta) and 1 on [theta, 2pi).
struct SturmianParams {
  double theta = 0.0;  // filled by the factory with the default angle
};

/// Two linear modes switched by an i.i.d. Bernoulli draw each step. The
/// output partitions the plane by the circles of radius 1 and 2: label 0 is
/// the open unit disk, labels 1-4 the annulus split into quadrants, labels
/// 5-8 the exterior split into quadrants.
struct SwitchedLinearParams {
  Mat2 a1;  // factory default: rotation by pi/6
  Mat2 a2;  // factory default: diag(1.02, 1/2)
  double switch_prob = 0.5;
  std::array<double, 2> box_low = {-2.0, -2.0};
  std::array<double, 2> box_high = {2.0, 2.0};
};

/// Fixed piecewise map on [0,2) with cells a=[0,1), b=[1,2):
///   [0,0.5)  -> itself          (self loop inside a)
///   [0.5,1)  -> the point 1.5   (a measure-zero subset of b)
///   [1,2)    -> itself, except f(1.5) = 0.25 (back into a)
/// Every "ab" is necessarily followed by "a"; a memory-1 chain estimated
/// from trajectories nevertheless assigns positive mass to "abb".
struct PiecewiseDemoParams {};

/// Explicit finite-state stochastic transition table with a labelling;
/// lets tests construct exact systems.
struct TableDrivenParams {
  std::vector<std::vector<double>> rows;   // row-stochastic, n x n
  std::vector<std::string> state_labels;   // one label per state
  std::vector<double> initial;             // over states; empty = uniform
};

class SystemSpec {
 public:
  using Params = std::variant<SturmianParams, SwitchedLinearParams, PiecewiseDemoParams,
                              TableDrivenParams>;

  static SystemSpec sturmian(double theta = default_sturmian_theta());
  static SystemSpec switched_linear(SwitchedLinearParams params = default_switched_params());
  static SystemSpec piecewise_demo();
  static SystemSpec table_driven(TableDrivenParams params);

  /// Replace the initial distribution with a Dirac mass at `x`.
  SystemSpec with_initial_point(const State& x) const;

  const Alphabet& alphabet() const { return alphabet_; }
  int dimension() const { return dimension_; }
  const std::string& id() const { return id_; }
  bool deterministic() const;
  const Params& params() const { return params_; }

  State sample_initial(RandomStream& rng) const;
  State step(const State& x, RandomStream& rng) const;
  std::uint8_t output(const State& x) const;

  static double default_sturmian_theta();
  static SwitchedLinearParams default_switched_params();

 private:
  SystemSpec(Params params, Alphabet alphabet, int dimension, std::string id);

  Params params_;
  Alphabet alphabet_;
  int dimension_;
  std::string id_;
  std::optional<State> initial_point_;
};

}  // namespace memabs
