#include "memabs/distance.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "memabs/errors.hpp"

namespace memabs {

namespace {

std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// One comparison side: either a model (membership queried on the transition
// graph, mass enumerated by unroll or estimated by sampling) or a fixed
// behaviour distribution (membership via a prefix trie over its support).
class BehaviorSide {
 public:
  explicit BehaviorSide(const MemoryMarkovModel& model) : model_(&model) {}
  explicit BehaviorSide(const BehaviorDistribution& fixed) : fixed_(&fixed) {}

  bool is_model() const { return model_ != nullptr; }
  int memory() const { return model_ ? model_->memory() : 0; }

  void check_horizon(std::size_t h) const {
    if (model_) {
      if (h < static_cast<std::size_t>(model_->memory()))
        throw std::invalid_argument("distance: horizon below the model memory");
    } else if (fixed_->word_length() != h) {
      throw std::invalid_argument("distance: reference behaviour has the wrong word length");
    }
  }

  BehaviorDistribution behavior(std::size_t h, std::size_t support_cap) const {
    if (model_) return unroll(*model_, h, support_cap);
    return *fixed_;
  }

  void build_membership() const {
    if (!model_ && trie_.word_count() == 0) {
      for (const auto& [word, p] : fixed_->distribution.entries()) trie_.insert(word);
    }
  }

  bool member(const Word& word) const {
    return model_ ? model_->supports_word(word) : trie_.contains(word);
  }

  const MemoryMarkovModel* model() const { return model_; }
  const BehaviorDistribution* fixed() const { return fixed_; }

 private:
  const MemoryMarkovModel* model_ = nullptr;
  const BehaviorDistribution* fixed_ = nullptr;
  mutable PrefixTrie trie_;
};

struct SideStats {
  double mass_outside = 0.0;
  std::size_t support = 0;
  double absorbed = 0.0;
};

// Monte-Carlo estimate of Q_{B_h(from)}(B_h(from) \ B_h(other)): each attempt
// is one raw path draw; absorbed attempts count toward the absorbed mass, so
// every term is an unbiased fraction of attempts.
SideStats mc_one_sided(const MemoryMarkovModel& from, const BehaviorSide& other,
                       std::size_t h, const DistanceOptions& options, std::uint64_t salt) {
  const std::size_t total = options.mc_samples;
  constexpr std::size_t kBlock = 4096;
  const std::size_t n_blocks = (total + kBlock - 1) / kBlock;

  unsigned n_threads = options.threads == 0 ? std::thread::hardware_concurrency()
                                            : static_cast<unsigned>(options.threads);
  if (n_threads < 1) n_threads = 1;
  if (n_threads > n_blocks) n_threads = static_cast<unsigned>(n_blocks);

  std::vector<std::uint64_t> outside_counts(n_threads, 0);
  std::vector<std::uint64_t> absorbed_counts(n_threads, 0);

  auto work = [&](unsigned tid, std::size_t block_begin, std::size_t block_end) {
    for (std::size_t b = block_begin; b < block_end; ++b) {
      RandomStream rng(options.mc_seed ^ salt, b);
      const std::size_t begin = b * kBlock;
      const std::size_t end = std::min(total, begin + kBlock);
      for (std::size_t i = begin; i < end; ++i) {
        auto word = try_sample_path(from, h, rng);
        if (!word) {
          ++absorbed_counts[tid];
        } else if (!other.member(*word)) {
          ++outside_counts[tid];
        }
      }
    }
  };

  if (n_threads == 1) {
    work(0, 0, n_blocks);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_blocks + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_blocks, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, t, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t outside = 0, absorbed = 0;
  for (unsigned t = 0; t < n_threads; ++t) {
    outside += outside_counts[t];
    absorbed += absorbed_counts[t];
  }
  return SideStats{static_cast<double>(outside) / static_cast<double>(total), 0,
                   static_cast<double>(absorbed) / static_cast<double>(total)};
}

// Exact one-sided term for a fixed behaviour: enumerate its support against
// the other side's membership.
SideStats fixed_one_sided(const BehaviorDistribution& from, const BehaviorSide& other) {
  SideStats stats;
  stats.support = from.distribution.support_size();
  stats.absorbed = from.absorbed;
  for (const auto& [word, mass] : from.distribution.entries()) {
    if (!other.member(word)) stats.mass_outside += mass;
  }
  return stats;
}

DistanceReport exact_distance(const BehaviorSide& s1, const BehaviorSide& s2, std::size_t h,
                              const DistanceOptions& options) {
  BehaviorDistribution b1 = s1.behavior(h, options.support_cap);
  BehaviorDistribution b2 = s2.behavior(h, options.support_cap);
  DistanceReport report;
  report.horizon = h;
  report.memory1 = s1.memory();
  report.memory2 = s2.memory();
  report.method = "exact";
  report.support1 = b1.distribution.support_size();
  report.support2 = b2.distribution.support_size();
  report.absorbed1 = b1.absorbed;
  report.absorbed2 = b2.absorbed;
  for (const auto& [word, mass] : b1.distribution.entries()) {
    if (!b2.distribution.contains(word)) report.left += mass;
  }
  for (const auto& [word, mass] : b2.distribution.entries()) {
    if (!b1.distribution.contains(word)) report.right += mass;
  }
  report.d = report.left + report.right;
  return report;
}

DistanceReport mc_distance(const BehaviorSide& s1, const BehaviorSide& s2, std::size_t h,
                           const DistanceOptions& options) {
  s1.build_membership();
  s2.build_membership();
  DistanceReport report;
  report.horizon = h;
  report.memory1 = s1.memory();
  report.memory2 = s2.memory();
  report.method = "monte-carlo(" + std::to_string(options.mc_samples) + ")";

  SideStats left = s1.is_model() ? mc_one_sided(*s1.model(), s2, h, options, 0x11ull)
                                 : fixed_one_sided(*s1.fixed(), s2);
  SideStats right = s2.is_model() ? mc_one_sided(*s2.model(), s1, h, options, 0x22ull)
                                  : fixed_one_sided(*s2.fixed(), s1);
  report.left = left.mass_outside;
  report.right = right.mass_outside;
  report.d = report.left + report.right;
  report.support1 = left.support;
  report.support2 = right.support;
  report.absorbed1 = left.absorbed;
  report.absorbed2 = right.absorbed;
  return report;
}

DistanceReport dispatch(const BehaviorSide& s1, const BehaviorSide& s2, std::size_t h,
                        const DistanceOptions& options) {
  s1.check_horizon(h);
  s2.check_horizon(h);
  switch (options.method) {
    case DistanceMethod::kExact:
      return exact_distance(s1, s2, h, options);
    case DistanceMethod::kMonteCarlo:
      return mc_distance(s1, s2, h, options);
    case DistanceMethod::kAuto:
      try {
        return exact_distance(s1, s2, h, options);
      } catch (const CapacityError&) {
        return mc_distance(s1, s2, h, options);
      }
  }
  throw std::logic_error("distance: unknown method");
}

}  // namespace

void PrefixTrie::insert(const Word& word) {
  std::size_t node = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto it = nodes_[node].children.find(word[i]);
    if (it == nodes_[node].children.end()) {
      nodes_.push_back(Node{});
      it = nodes_[node].children.emplace(word[i], nodes_.size() - 1).first;
    }
    node = it->second;
  }
  if (!nodes_[node].terminal) {
    nodes_[node].terminal = true;
    ++words_;
  }
}

bool PrefixTrie::contains(const Word& word) const {
  std::size_t node = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto it = nodes_[node].children.find(word[i]);
    if (it == nodes_[node].children.end()) return false;
    node = it->second;
  }
  return nodes_[node].terminal;
}

BehaviorDistribution empirical_behavior(const SampleSet& samples,
                                        std::size_t horizon_letters) {
  if (samples.words.empty())
    throw std::invalid_argument("empirical_behavior: empty sample set");
  if (horizon_letters == 0 || horizon_letters > samples.words.front().size())
    throw std::invalid_argument("empirical_behavior: horizon exceeds the sample length");
  std::map<Word, double> probs;
  const double unit = 1.0 / static_cast<double>(samples.words.size());
  for (const auto& word : samples.words) {
    probs[word.prefix(horizon_letters)] += unit;
  }
  return BehaviorDistribution{CategoricalDistribution(horizon_letters, std::move(probs)), 0.0};
}

DistanceReport distance(const MemoryMarkovModel& m1, const MemoryMarkovModel& m2,
                        std::size_t horizon_letters, const DistanceOptions& options) {
  if (!(m1.alphabet() == m2.alphabet()))
    throw std::invalid_argument("distance: alphabets differ");
  return dispatch(BehaviorSide(m1), BehaviorSide(m2), horizon_letters, options);
}

DistanceReport distance(const MemoryMarkovModel& m1, const BehaviorDistribution& b2,
                        std::size_t horizon_letters, const DistanceOptions& options) {
  return dispatch(BehaviorSide(m1), BehaviorSide(b2), horizon_letters, options);
}

DistanceReport distance(const BehaviorDistribution& b1, const MemoryMarkovModel& m2,
                        std::size_t horizon_letters, const DistanceOptions& options) {
  return dispatch(BehaviorSide(b1), BehaviorSide(m2), horizon_letters, options);
}

DistanceReport distance(const BehaviorDistribution& b1, const BehaviorDistribution& b2,
                        std::size_t horizon_letters, const DistanceOptions& options) {
  return dispatch(BehaviorSide(b1), BehaviorSide(b2), horizon_letters, options);
}

double spurious_mass(const MemoryMarkovModel& model, const MemoryMarkovModel& reference,
                     std::size_t horizon_letters, const DistanceOptions& options) {
  return distance(model, reference, horizon_letters, options).left;
}

double spurious_mass(const MemoryMarkovModel& model, const BehaviorDistribution& reference,
                     std::size_t horizon_letters, const DistanceOptions& options) {
  return distance(model, reference, horizon_letters, options).left;
}

DistanceReport support_identity_check(const SampleSet& samples, std::size_t horizon_letters,
                                  const DistanceOptions& options) {
  MemoryMarkovModel model = build_model(samples, static_cast<int>(horizon_letters));
  BehaviorDistribution reference = empirical_behavior(samples, horizon_letters);
  return distance(model, reference, horizon_letters, options);
}

std::string distance_csv_header() {
  return "h,ell1,ell2,d,left,right,method,support1,support2,absorbed1,absorbed2";
}

std::string distance_csv_row(const DistanceReport& r) {
  std::ostringstream out;
  out << r.horizon << ',' << r.memory1 << ',' << r.memory2 << ',' << format_prob(r.d) << ','
      << format_prob(r.left) << ',' << format_prob(r.right) << ',' << r.method << ','
      << r.support1 << ',' << r.support2 << ',' << format_prob(r.absorbed1) << ','
      << format_prob(r.absorbed2);
  return out.str();
}

std::string distance_json(const DistanceReport& r) {
  nlohmann::json j;
  j["h"] = r.horizon;
  j["ell1"] = r.memory1;
  j["ell2"] = r.memory2;
  j["d"] = r.d;
  j["left"] = r.left;
  j["right"] = r.right;
  j["method"] = r.method;
  j["support1"] = r.support1;
  j["support2"] = r.support2;
  j["absorbed1"] = r.absorbed1;
  j["absorbed2"] = r.absorbed2;
  return j.dump(2);
}

}  // namespace memabs
