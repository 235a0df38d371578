#include "memabs/system.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace memabs {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }

Alphabet nine_cell_alphabet() {
  return Alphabet({"0", "1", "2", "3", "4", "5", "6", "7", "8"});
}

// Quadrant index: (x>=0,y>=0)->0, (x<0,y>=0)->1, (x<0,y<0)->2, (x>=0,y<0)->3.
int quadrant(const State& x) {
  if (x[1] >= 0.0) return x[0] >= 0.0 ? 0 : 1;
  return x[0] < 0.0 ? 2 : 3;
}

void validate_table(const TableDrivenParams& p) {
  const std::size_t n = p.rows.size();
  if (n == 0) throw std::invalid_argument("table-driven: needs at least one state");
  if (p.state_labels.size() != n)
    throw std::invalid_argument("table-driven: one label per state required");
  for (const auto& row : p.rows) {
    if (row.size() != n)
      throw std::invalid_argument("table-driven: transition table must be square");
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0 || !std::isfinite(v))
        throw std::invalid_argument("table-driven: transition entries must be in [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("table-driven: each table row must sum to 1");
  }
  if (!p.initial.empty()) {
    if (p.initial.size() != n)
      throw std::invalid_argument("table-driven: initial distribution size mismatch");
    double sum = 0.0;
    for (double v : p.initial) {
      if (v < 0.0 || !std::isfinite(v))
        throw std::invalid_argument("table-driven: initial entries must be in [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("table-driven: initial distribution must sum to 1");
  }
}

Alphabet table_alphabet(const TableDrivenParams& p) {
  std::vector<std::string> labels;
  for (const auto& label : p.state_labels) {
    bool known = false;
    for (const auto& seen : labels) {
      if (seen == label) {
        known = true;
        break;
      }
    }
    if (!known) labels.push_back(label);
  }
  return Alphabet(std::move(labels));
}

}  // namespace

SystemSpec::SystemSpec(Params params, Alphabet alphabet, int dimension, std::string id)
    : params_(std::move(params)),
      alphabet_(std::move(alphabet)),
      dimension_(dimension),
      id_(std::move(id)) {}

double SystemSpec::default_sturmian_theta() { return kTwoPi * (std::sqrt(2.0) - 1.0); }

SwitchedLinearParams SystemSpec::default_switched_params() {
  SwitchedLinearParams p;
  const double c = std::cos(kTwoPi / 12.0);  // pi/6
  const double s = std::sin(kTwoPi / 12.0);
  p.a1 = Mat2{c, s, -s, c};
  p.a2 = Mat2{1.02, 0.0, 0.0, 0.5};
  return p;
}

SystemSpec SystemSpec::sturmian(double theta) {
  if (!(theta > 0.0) || !(theta < kTwoPi))
    throw std::invalid_argument("sturmian: theta must lie in (0, 2pi)");
  return SystemSpec(SturmianParams{theta}, binary_alphabet(), 1,
                    "sturmian(theta=" + format_double(theta) + ")");
}

SystemSpec SystemSpec::switched_linear(SwitchedLinearParams params) {
  if (params.switch_prob < 0.0 || params.switch_prob > 1.0)
    throw std::invalid_argument("switched-linear: switch probability must be in [0,1]");
  for (int i = 0; i < 2; ++i) {
    if (!(params.box_low[i] <= params.box_high[i]))
      throw std::invalid_argument("switched-linear: initial box is empty");
  }
  return SystemSpec(params, nine_cell_alphabet(), 2,
                    "switched-linear(p=" + format_double(params.switch_prob) + ")");
}

SystemSpec SystemSpec::piecewise_demo() {
  return SystemSpec(PiecewiseDemoParams{}, Alphabet({"a", "b"}), 1, "piecewise-demo");
}

SystemSpec SystemSpec::table_driven(TableDrivenParams params) {
  validate_table(params);
  Alphabet alphabet = table_alphabet(params);
  const std::size_t n = params.rows.size();
  return SystemSpec(std::move(params), std::move(alphabet), 1,
                    "table-driven(" + std::to_string(n) + " states)");
}

SystemSpec SystemSpec::with_initial_point(const State& x) const {
  SystemSpec copy = *this;
  if (const auto* sturm = std::get_if<SturmianParams>(&params_)) {
    (void)sturm;
    if (x[0] < 0.0 || x[0] >= kTwoPi)
      throw std::invalid_argument("initial point outside [0, 2pi)");
  } else if (std::holds_alternative<PiecewiseDemoParams>(params_)) {
    if (x[0] < 0.0 || x[0] >= 2.0)
      throw std::invalid_argument("initial point outside [0, 2)");
  } else if (const auto* table = std::get_if<TableDrivenParams>(&params_)) {
    const auto idx = static_cast<long long>(std::llround(x[0]));
    if (idx < 0 || static_cast<std::size_t>(idx) >= table->rows.size())
      throw std::invalid_argument("initial state index out of range");
  }
  copy.initial_point_ = x;
  return copy;
}

bool SystemSpec::deterministic() const {
  return std::holds_alternative<SturmianParams>(params_) ||
         std::holds_alternative<PiecewiseDemoParams>(params_);
}

State SystemSpec::sample_initial(RandomStream& rng) const {
  if (initial_point_) return *initial_point_;
  if (std::holds_alternative<SturmianParams>(params_)) {
    return {rng.uniform(0.0, kTwoPi), 0.0};
  }
  if (std::holds_alternative<PiecewiseDemoParams>(params_)) {
    return {rng.uniform(0.0, 2.0), 0.0};
  }
  if (const auto* sw = std::get_if<SwitchedLinearParams>(&params_)) {
    return {rng.uniform(sw->box_low[0], sw->box_high[0]),
            rng.uniform(sw->box_low[1], sw->box_high[1])};
  }
  const auto& table = std::get<TableDrivenParams>(params_);
  std::size_t idx;
  if (table.initial.empty()) {
    idx = static_cast<std::size_t>(rng.next_double() * static_cast<double>(table.rows.size()));
    if (idx >= table.rows.size()) idx = table.rows.size() - 1;
  } else {
    idx = rng.categorical(table.initial);
  }
  return {static_cast<double>(idx), 0.0};
}

State SystemSpec::step(const State& x, RandomStream& rng) const {
  if (const auto* sturm = std::get_if<SturmianParams>(&params_)) {
    // 0 < theta < 2pi guarantees at most one wrap; subtract-once avoids
    // generic fmod error.
    double next = x[0] + sturm->theta;
    if (next >= kTwoPi) next -= kTwoPi;
    return {next, 0.0};
  }
  if (std::holds_alternative<PiecewiseDemoParams>(params_)) {
    const double v = x[0];
    if (v < 0.5) return {v, 0.0};
    if (v < 1.0) return {1.5, 0.0};
    if (v == 1.5) return {0.25, 0.0};
    return {v, 0.0};
  }
  if (const auto* sw = std::get_if<SwitchedLinearParams>(&params_)) {
    return rng.bernoulli(sw->switch_prob) ? sw->a1.apply(x) : sw->a2.apply(x);
  }
  const auto& table = std::get<TableDrivenParams>(params_);
  const auto idx = static_cast<std::size_t>(std::llround(x[0]));
  if (idx >= table.rows.size())
    throw std::invalid_argument("table-driven: state index out of range");
  return {static_cast<double>(rng.categorical(table.rows[idx])), 0.0};
}

std::uint8_t SystemSpec::output(const State& x) const {
  if (const auto* sturm = std::get_if<SturmianParams>(&params_)) {
    return x[0] < sturm->theta ? 0 : 1;
  }
  if (std::holds_alternative<PiecewiseDemoParams>(params_)) {
    return x[0] < 1.0 ? 0 : 1;
  }
  if (std::holds_alternative<SwitchedLinearParams>(params_)) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 1.0) return 0;
    const int q = quadrant(x);
    return static_cast<std::uint8_t>(r2 < 4.0 ? 1 + q : 5 + q);
  }
  const auto& table = std::get<TableDrivenParams>(params_);
  const auto idx = static_cast<std::size_t>(std::llround(x[0]));
  if (idx >= table.rows.size())
    throw std::invalid_argument("table-driven: state index out of range");
  return *alphabet_.index_of(table.state_labels[idx]);
}

}  // namespace memabs
