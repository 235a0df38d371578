#include "memabs/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "memabs/errors.hpp"

namespace memabs {

namespace {

std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MemoryMarkovModel::MemoryMarkovModel(Alphabet alphabet, int memory, std::set<Word> states,
                                     std::map<Word, Row> transitions,
                                     CategoricalDistribution initial, double initial_absorbed,
                                     ModelProvenance provenance)
    : alphabet_(std::move(alphabet)),
      memory_(memory),
      states_(std::move(states)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)),
      initial_absorbed_(initial_absorbed),
      provenance_(std::move(provenance)) {
  if (memory_ < 1) throw std::invalid_argument("model: memory must be at least 1");
  if (initial_absorbed_ < 0.0 || initial_absorbed_ > 1.0 + 1e-12)
    throw std::invalid_argument("model: absorbed mass outside [0,1]");
  const auto mem = static_cast<std::size_t>(memory_);
  for (const auto& state : states_) {
    if (state.size() != mem)
      throw std::invalid_argument("model: state length differs from the memory");
  }
  if (!initial_.entries().empty() && initial_.word_length() != mem)
    throw std::invalid_argument("model: initial-distribution word length mismatch");
  for (const auto& [word, p] : initial_.entries()) {
    if (!states_.count(word))
      throw std::invalid_argument("model: initial distribution outside the state set");
  }
  for (const auto& [state, row] : transitions_) {
    if (!states_.count(state))
      throw std::invalid_argument("model: transition source is not a state");
    if (row.empty()) throw std::invalid_argument("model: empty transition row");
    double sum = 0.0;
    int last_letter = -1;
    for (const auto& [letter, p] : row) {
      if (letter >= alphabet_.size())
        throw std::invalid_argument("model: transition letter outside the alphabet");
      if (static_cast<int>(letter) <= last_letter)
        throw std::invalid_argument("model: transition row not sorted by letter");
      last_letter = letter;
      if (p <= 0.0 || !std::isfinite(p))
        throw std::invalid_argument("model: transition probabilities must be positive");
      sum += p;
      if (!states_.count(state.shifted_append(letter)))
        throw std::invalid_argument("model: transition target is not a state");
    }
    if (std::abs(sum - 1.0) > CategoricalDistribution::kMassTolerance)
      throw std::invalid_argument("model: outgoing probabilities must sum to 1");
  }
}

const MemoryMarkovModel::Row* MemoryMarkovModel::row(const Word& state) const {
  auto it = transitions_.find(state);
  return it == transitions_.end() ? nullptr : &it->second;
}

double MemoryMarkovModel::transition_prob(const Word& state, std::uint8_t letter) const {
  const Row* r = row(state);
  if (!r) return 0.0;
  for (const auto& [c, p] : *r) {
    if (c == letter) return p;
  }
  return 0.0;
}

std::size_t MemoryMarkovModel::transition_count() const {
  std::size_t n = 0;
  for (const auto& [state, row] : transitions_) n += row.size();
  return n;
}

bool MemoryMarkovModel::supports_word(const Word& word) const {
  const auto mem = static_cast<std::size_t>(memory_);
  if (word.size() < mem) return false;
  Word state = word.prefix(mem);
  if (initial_.prob(state) <= 0.0) return false;
  for (std::size_t k = mem; k < word.size(); ++k) {
    if (transition_prob(state, word[k]) <= 0.0) return false;
    state = state.shifted_append(word[k]);
  }
  return true;
}

MemoryMarkovModel build_model(const SampleSet& samples, int memory) {
  if (samples.words.empty()) throw std::invalid_argument("build_model: empty sample set");
  if (memory < 1) throw std::invalid_argument("build_model: memory must be at least 1");
  const std::size_t length = samples.words.front().size();
  const auto mem = static_cast<std::size_t>(memory);
  if (mem >= length)
    throw std::invalid_argument("build_model: memory must be smaller than the sample length");

  const std::size_t n_letters = samples.alphabet.size();
  std::unordered_map<Word, std::vector<std::uint64_t>, WordHash> counts;
  std::map<Word, std::uint64_t> prefix_counts;
  std::set<Word> states;

  for (const auto& word : samples.words) {
    if (word.size() != length)
      throw std::invalid_argument("build_model: sample words have unequal lengths");
    for (std::size_t pos = 0; pos + mem <= word.size(); ++pos) {
      Word window = word.subword(pos, mem);
      if (pos + mem < word.size()) {
        auto& row = counts[window];
        if (row.empty()) row.assign(n_letters, 0);
        ++row[word[pos + mem]];
      }
      states.insert(std::move(window));
    }
    ++prefix_counts[word.prefix(mem)];
  }

  std::map<Word, MemoryMarkovModel::Row> transitions;
  for (auto& [state, row_counts] : counts) {
    std::uint64_t denom = 0;
    for (std::uint64_t c : row_counts) denom += c;
    MemoryMarkovModel::Row row;
    for (std::size_t c = 0; c < n_letters; ++c) {
      if (row_counts[c] > 0) {
        row.emplace_back(static_cast<std::uint8_t>(c),
                         static_cast<double>(row_counts[c]) / static_cast<double>(denom));
      }
    }
    transitions.emplace(state, std::move(row));
  }

  std::map<Word, double> initial;
  const auto n_words = static_cast<double>(samples.words.size());
  for (const auto& [word, count] : prefix_counts) {
    initial.emplace(word, static_cast<double>(count) / n_words);
  }

  ModelProvenance provenance{samples.meta.system_id, samples.meta.seed,
                             samples.meta.n_trajectories, samples.meta.word_length};
  return MemoryMarkovModel(samples.alphabet, memory, std::move(states), std::move(transitions),
                           CategoricalDistribution(mem, std::move(initial)), 0.0,
                           std::move(provenance));
}

MemoryMarkovModel lift(const MemoryMarkovModel& model, int target_memory,
                       std::size_t state_cap) {
  if (target_memory < model.memory())
    throw std::invalid_argument("lift: cannot lower the memory");
  if (target_memory == model.memory()) return model;
  const auto mem = static_cast<std::size_t>(model.memory());
  const auto target = static_cast<std::size_t>(target_memory);

  // Unroll the initial distribution forward target-mem steps; paths that die
  // on the way become an initial-mass deficit rather than being renormalized.
  std::vector<std::pair<Word, double>> frontier(model.initial().entries().begin(),
                                                model.initial().entries().end());
  double lost = model.initial_absorbed();
  for (std::size_t len = mem; len < target; ++len) {
    std::vector<std::pair<Word, double>> next;
    next.reserve(frontier.size());
    for (const auto& [word, mass] : frontier) {
      const auto* row = model.row(word.suffix(mem));
      if (!row) {
        lost += mass;
        continue;
      }
      for (const auto& [letter, p] : *row) {
        next.emplace_back(word.appended(letter), mass * p);
        if (next.size() > state_cap)
          throw CapacityError("lift: initial support exceeds the state cap of " +
                              std::to_string(state_cap));
      }
    }
    frontier = std::move(next);
  }

  std::map<Word, double> initial(frontier.begin(), frontier.end());
  std::set<Word> states;
  std::vector<Word> queue;
  for (const auto& [word, mass] : initial) {
    if (states.insert(word).second) queue.push_back(word);
  }

  std::map<Word, MemoryMarkovModel::Row> transitions;
  while (!queue.empty()) {
    Word state = std::move(queue.back());
    queue.pop_back();
    const auto* row = model.row(state.suffix(mem));
    if (!row) continue;
    for (const auto& [letter, p] : *row) {
      Word next = state.shifted_append(letter);
      if (states.insert(next).second) {
        if (states.size() > state_cap)
          throw CapacityError("lift: reachable state set exceeds the cap of " +
                              std::to_string(state_cap));
        queue.push_back(std::move(next));
      }
    }
    transitions.emplace(std::move(state), *row);
  }

  return MemoryMarkovModel(model.alphabet(), target_memory, std::move(states),
                           std::move(transitions),
                           CategoricalDistribution(target, std::move(initial), 1.0 - lost),
                           lost, model.provenance());
}

BehaviorDistribution unroll(const MemoryMarkovModel& model, std::size_t horizon_letters,
                            std::size_t support_cap) {
  const auto mem = static_cast<std::size_t>(model.memory());
  if (horizon_letters < mem)
    throw std::invalid_argument("unroll: horizon below the model memory");

  // Breadth-first expansion; parents in lexicographic order and letters in
  // ascending order keep every level sorted without re-sorting.
  std::vector<std::pair<Word, double>> frontier(model.initial().entries().begin(),
                                                model.initial().entries().end());
  double absorbed = model.initial_absorbed();
  for (std::size_t len = mem; len < horizon_letters; ++len) {
    std::vector<std::pair<Word, double>> next;
    next.reserve(frontier.size() + frontier.size() / 2);
    for (const auto& [word, mass] : frontier) {
      const auto* row = model.row(word.suffix(mem));
      if (!row) {
        absorbed += mass;
        continue;
      }
      for (const auto& [letter, p] : *row) {
        next.emplace_back(word.appended(letter), mass * p);
        if (next.size() > support_cap)
          throw CapacityError("unroll: support exceeds the cap of " +
                              std::to_string(support_cap) +
                              "; use the monte-carlo estimator");
      }
    }
    frontier = std::move(next);
  }

  std::map<Word, double> probs;
  auto hint = probs.end();
  for (auto& [word, mass] : frontier) {
    hint = probs.emplace_hint(hint, std::move(word), mass);
  }
  return BehaviorDistribution{
      CategoricalDistribution(horizon_letters, std::move(probs), 1.0 - absorbed), absorbed};
}

std::optional<Word> try_sample_path(const MemoryMarkovModel& model,
                                    std::size_t horizon_letters, RandomStream& rng) {
  const auto mem = static_cast<std::size_t>(model.memory());
  if (horizon_letters < mem)
    throw std::invalid_argument("sample: horizon below the model memory");
  if (model.initial().entries().empty())
    throw std::invalid_argument("sample: model has an empty initial distribution");

  // Initial draw over [0,1): mass above the initial total is the lift deficit
  // and counts as an absorbed attempt.
  double u = rng.next_double();
  const Word* start = nullptr;
  for (const auto& [word, mass] : model.initial().entries()) {
    if (u < mass) {
      start = &word;
      break;
    }
    u -= mass;
  }
  if (!start) return std::nullopt;

  Word word = *start;
  Word state = *start;
  for (std::size_t k = mem; k < horizon_letters; ++k) {
    const auto* row = model.row(state);
    if (!row) return std::nullopt;
    double v = rng.next_double();
    std::uint8_t chosen = row->back().first;
    for (const auto& [letter, p] : *row) {
      if (v < p) {
        chosen = letter;
        break;
      }
      v -= p;
    }
    word.push_back(chosen);
    state = state.shifted_append(chosen);
  }
  return word;
}

SampleSet sample_model(const MemoryMarkovModel& model, std::size_t n_words,
                       std::size_t horizon_letters, std::uint64_t seed) {
  if (n_words == 0) throw std::invalid_argument("sample_model: need at least one word");
  constexpr std::size_t kMaxRejections = 1'000'000;

  SampleSet samples{model.alphabet(), {}, {}, {}};
  samples.words.reserve(n_words);
  for (std::size_t i = 0; i < n_words; ++i) {
    RandomStream rng(seed, i);
    std::optional<Word> word;
    std::size_t rejections = 0;
    while (!(word = try_sample_path(model, horizon_letters, rng))) {
      if (++rejections >= kMaxRejections)
        throw std::runtime_error("sample_model: all sampled paths are absorbed");
    }
    samples.words.push_back(std::move(*word));
  }
  samples.meta = SampleMeta{"model(memory=" + std::to_string(model.memory()) + ")", seed,
                            n_words, horizon_letters, 1};
  return samples;
}

void write_model(const MemoryMarkovModel& model, std::ostream& out) {
  const auto& alphabet = model.alphabet();
  out << "memory-markov-model 1\n";
  out << "alphabet";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    out << ' ' << alphabet.label(static_cast<std::uint8_t>(i));
  }
  out << '\n';
  out << "memory " << model.memory() << '\n';
  out << "states " << model.states().size() << '\n';
  out << "transitions " << model.transition_count() << '\n';
  out << "initial " << model.initial().support_size() << '\n';
  out << "absorbed " << format_prob(model.initial_absorbed()) << '\n';
  for (const auto& [word, p] : model.initial().entries()) {
    out << alphabet.render(word) << ' ' << format_prob(p) << '\n';
  }
  for (const auto& [state, row] : model.transitions()) {
    for (const auto& [letter, p] : row) {
      out << alphabet.render(state) << ' ' << alphabet.label(letter) << ' ' << format_prob(p)
          << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::string read_header_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("model file: truncated header");
  auto tokens = split_ws(line);
  if (tokens.size() != 2 || tokens[0] != key)
    throw IoError("model file: expected '" + key + " <value>'");
  return tokens[1];
}

double parse_prob(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw IoError("model file: malformed probability '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("model file: malformed probability '" + text + "'");
  }
}

}  // namespace

MemoryMarkovModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"memory-markov-model", "1"})
    throw IoError("model file: missing 'memory-markov-model 1' header");
  if (!std::getline(in, line)) throw IoError("model file: truncated header");
  auto alpha_tokens = split_ws(line);
  if (alpha_tokens.size() < 2 || alpha_tokens[0] != "alphabet")
    throw IoError("model file: expected an alphabet line");
  Alphabet alphabet(std::vector<std::string>(alpha_tokens.begin() + 1, alpha_tokens.end()));

  int memory = 0;
  std::size_t n_states = 0, n_transitions = 0, n_initial = 0;
  try {
    memory = std::stoi(read_header_line(in, "memory"));
    n_states = static_cast<std::size_t>(std::stoull(read_header_line(in, "states")));
    n_transitions = static_cast<std::size_t>(std::stoull(read_header_line(in, "transitions")));
    n_initial = static_cast<std::size_t>(std::stoull(read_header_line(in, "initial")));
  } catch (const std::logic_error&) {
    throw IoError("model file: malformed header count");
  }
  const double absorbed = parse_prob(read_header_line(in, "absorbed"));

  std::map<Word, double> initial;
  for (std::size_t i = 0; i < n_initial; ++i) {
    if (!std::getline(in, line)) throw IoError("model file: truncated initial distribution");
    auto tokens = split_ws(line);
    if (tokens.size() != 2) throw IoError("model file: expected 'word prob'");
    initial.emplace(alphabet.parse(tokens[0]), parse_prob(tokens[1]));
  }

  std::set<Word> states;
  std::map<Word, MemoryMarkovModel::Row> transitions;
  for (const auto& [word, p] : initial) states.insert(word);
  for (std::size_t i = 0; i < n_transitions; ++i) {
    if (!std::getline(in, line)) throw IoError("model file: truncated transition list");
    auto tokens = split_ws(line);
    if (tokens.size() != 3) throw IoError("model file: expected 'word letter prob'");
    Word state = alphabet.parse(tokens[0]);
    auto letter = alphabet.index_of(tokens[1]);
    if (!letter) throw IoError("model file: unknown letter '" + tokens[1] + "'");
    states.insert(state.shifted_append(*letter));
    states.insert(state);
    transitions[std::move(state)].emplace_back(*letter, parse_prob(tokens[2]));
  }
  for (auto& [state, row] : transitions) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  if (states.size() != n_states)
    throw IoError("model file: state count does not match the header");

  return MemoryMarkovModel(std::move(alphabet), memory, std::move(states),
                           std::move(transitions),
                           CategoricalDistribution(static_cast<std::size_t>(memory),
                                                   std::move(initial), 1.0 - absorbed),
                           absorbed);
}

void write_model_file(const MemoryMarkovModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(model, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

MemoryMarkovModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_model(in);
}

}  // namespace memabs
