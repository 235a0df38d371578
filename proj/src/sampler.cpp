#include "memabs/sampler.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "memabs/errors.hpp"

namespace memabs {

namespace {

void run_trajectory(const SystemSpec& system, std::size_t word_length, std::uint64_t seed,
                    std::size_t index, Word& word_out, std::vector<State>* states_out) {
  RandomStream rng(seed, index);
  std::vector<std::uint8_t> letters;
  letters.reserve(word_length);
  State x = system.sample_initial(rng);
  letters.push_back(system.output(x));
  if (states_out) states_out->push_back(x);
  for (std::size_t k = 1; k < word_length; ++k) {
    x = system.step(x, rng);
    letters.push_back(system.output(x));
    if (states_out) states_out->push_back(x);
  }
  word_out = Word(std::move(letters));
}

}  // namespace

SampleSet simulate(const SystemSpec& system, std::size_t n_trajectories,
                   std::size_t word_length, std::uint64_t seed, bool keep_states,
                   const SimulateOptions& options) {
  if (n_trajectories == 0) throw std::invalid_argument("simulate: need at least one trajectory");
  if (word_length == 0) throw std::invalid_argument("simulate: need at least one letter");
  if (n_trajectories > options.max_letters / word_length) {
    throw CapacityError("simulate: " + std::to_string(n_trajectories) + " x " +
                        std::to_string(word_length) + " letters exceeds the cap of " +
                        std::to_string(options.max_letters));
  }

  SampleSet samples{system.alphabet(), {}, {}, {}};
  samples.words.resize(n_trajectories);
  if (keep_states) samples.states.resize(n_trajectories);
  samples.meta = SampleMeta{system.id(), seed, n_trajectories, word_length,
                            system.dimension()};

  unsigned n_threads = options.threads == 0 ? std::thread::hardware_concurrency()
                                            : static_cast<unsigned>(options.threads);
  if (n_threads < 1) n_threads = 1;
  if (n_threads > n_trajectories) n_threads = static_cast<unsigned>(n_trajectories);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (keep_states) samples.states[i].reserve(word_length);
      run_trajectory(system, word_length, seed, i, samples.words[i],
                     keep_states ? &samples.states[i] : nullptr);
    }
  };

  if (n_threads == 1) {
    work(0, n_trajectories);
  } else {
    // Trajectory i writes only slot i, so contiguous chunks are race-free and
    // the result does not depend on the thread count.
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_trajectories + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_trajectories, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return samples;
}

void write_words(const SampleSet& samples, std::ostream& out) {
  for (const auto& word : samples.words) {
    out << samples.alphabet.render(word) << '\n';
  }
}

void write_states_csv(const SampleSet& samples, std::ostream& out) {
  const int dim = samples.meta.state_dimension;
  out << (dim == 1 ? "trajectory,step,x0" : "trajectory,step,x0,x1") << '\n';
  char buf[64];
  for (std::size_t i = 0; i < samples.states.size(); ++i) {
    for (std::size_t k = 0; k < samples.states[i].size(); ++k) {
      out << i << ',' << k;
      for (int d = 0; d < dim; ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", samples.states[i][k][d]);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace memabs
