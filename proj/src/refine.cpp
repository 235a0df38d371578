#include "memabs/refine.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "memabs/errors.hpp"

namespace memabs {

namespace {

std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

std::uint64_t level_seed(std::uint64_t seed, int level) {
  return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(level + 1));
}

DistanceOptions distance_options(const RefinementConfig& cfg) {
  DistanceOptions opts;
  opts.method = cfg.method;
  opts.mc_samples = cfg.mc_samples;
  opts.support_cap = cfg.support_cap;
  opts.threads = cfg.threads;
  return opts;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_artifacts(const RefinementConfig& cfg, const RefinementReport& report,
                     const MemoryMarkovModel* final_model, const SampleSet& samples) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create '" + cfg.out_dir.string() + "': " + ec.message());

  {
    auto out = open_out(cfg.out_dir / "report.csv");
    write_refinement_csv(report, out);
  }
  {
    auto out = open_out(cfg.out_dir / "report.json");
    out << refinement_json(report, cfg) << '\n';
  }
  {
    // Wall times vary run to run, so they live outside the deterministic
    // reports.
    auto out = open_out(cfg.out_dir / "timings.txt");
    for (const auto& level : report.levels) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3f", level.wall_ms);
      out << level.memory << ' ' << buf << '\n';
    }
  }
  if (final_model) {
    write_model_file(*final_model,
                     cfg.out_dir / ("model_" + std::to_string(report.final_memory) + ".txt"));
  }
  if (cfg.export_partition && final_model) {
    PartitionExport partition = export_partition(samples, report.final_memory);
    auto out = open_out(cfg.out_dir /
                        ("partition_" + std::to_string(report.final_memory) + ".csv"));
    write_partition_csv(partition, samples.alphabet, out);
  }
  if (cfg.write_samples) {
    auto out = open_out(cfg.out_dir / "samples.txt");
    write_words(samples, out);
  }
}

}  // namespace

void RefinementConfig::validate() const {
  if (max_memory < 1) throw std::invalid_argument("refine: max memory must be at least 1");
  if (static_cast<std::size_t>(max_memory) >= horizon)
    throw std::invalid_argument("refine: the invariant max_memory < horizon is violated");
  if (horizon > word_length)
    throw std::invalid_argument("refine: the invariant horizon <= sample length is violated");
  if (report_vs_horizon && horizon >= word_length)
    throw std::invalid_argument(
        "refine: comparing against the memory-h model needs horizon < sample length");
  if (!(threshold > 0.0)) throw std::invalid_argument("refine: threshold must be positive");
  if (n_trajectories == 0) throw std::invalid_argument("refine: need at least one trajectory");
}

RefinementReport run_refinement(const RefinementConfig& cfg) {
  cfg.validate();
  const DistanceOptions opts = distance_options(cfg);
  SimulateOptions sim_opts{cfg.max_letters, cfg.threads};

  SampleSet samples = simulate(cfg.system, cfg.n_trajectories, cfg.word_length, cfg.seed,
                               cfg.export_partition, sim_opts);

  RefinementReport report;
  std::optional<MemoryMarkovModel> horizon_model;
  std::optional<MemoryMarkovModel> previous;
  std::optional<MemoryMarkovModel> final_model;

  try {
    if (cfg.report_vs_horizon) {
      horizon_model = build_model(samples, static_cast<int>(cfg.horizon));
    }

    for (int memory = 1; memory <= cfg.max_memory; ++memory) {
      const auto t0 = std::chrono::steady_clock::now();
      const SampleSet* level_samples = &samples;
      std::optional<SampleSet> fresh;
      if (cfg.resample_per_level && memory > 1) {
        fresh = simulate(cfg.system, cfg.n_trajectories, cfg.word_length,
                         level_seed(cfg.seed, memory), cfg.export_partition, sim_opts);
        level_samples = &*fresh;
      }

      MemoryMarkovModel model = build_model(*level_samples, memory);
      LevelRecord record;
      record.memory = memory;
      record.n_states = model.states().size();
      record.n_transitions = model.transition_count();

      if (horizon_model) {
        DistanceReport vs = distance(model, *horizon_model, cfg.horizon, opts);
        record.d_vs_horizon = vs.d;
        record.method_vs_horizon = vs.method;
      }

      double d_adjacent = -1.0;
      if (previous) {
        DistanceReport adj = distance(*previous, model, cfg.horizon, opts);
        report.levels.back().d_adjacent = adj.d;
        report.levels.back().method_adjacent = adj.method;
        d_adjacent = adj.d;
        // For same-sample refinements the finer model's behaviour nests
        // inside the coarser one's, so the right term should vanish up to
        // support-prune dust.
        if (!cfg.resample_per_level && adj.right > 1e-6) {
          std::cerr << "warning: refinement pair (" << memory - 1 << "," << memory
                    << ") has mass " << adj.right << " on the refined side only\n";
        }
      }

      record.wall_ms = elapsed_ms(t0);
      report.levels.push_back(std::move(record));
      report.final_memory = memory;
      final_model = std::move(model);

      if (cfg.verbose) {
        std::cerr << "memory " << memory << ": states=" << report.levels.back().n_states;
        if (report.levels.size() > 1 && report.levels[report.levels.size() - 2].d_adjacent)
          std::cerr << " d_adjacent=" << *report.levels[report.levels.size() - 2].d_adjacent;
        std::cerr << '\n';
      }

      if (d_adjacent >= 0.0 && d_adjacent <= cfg.threshold) {
        report.termination = "threshold";
        break;
      }
      previous = final_model;
    }
    if (report.termination.empty()) report.termination = "max-memory";
  } catch (const CapacityError& e) {
    report.termination = "capacity";
    report.capacity_memory = report.final_memory + 1;
    report.capacity_detail = e.what();
  }

  if (!cfg.out_dir.empty()) {
    write_artifacts(cfg, report, final_model ? &*final_model : nullptr, samples);
  }
  return report;
}

PartitionExport export_partition(const SampleSet& samples, int memory) {
  if (!samples.has_states())
    throw std::invalid_argument("export_partition: samples were taken without states");
  if (memory < 1) throw std::invalid_argument("export_partition: memory must be at least 1");
  const auto mem = static_cast<std::size_t>(memory);
  if (mem > samples.meta.word_length)
    throw std::invalid_argument("export_partition: memory exceeds the sample length");

  PartitionExport partition;
  partition.dimension = samples.meta.state_dimension;
  for (std::size_t i = 0; i < samples.words.size(); ++i) {
    const Word& word = samples.words[i];
    for (std::size_t k = mem - 1; k < word.size(); ++k) {
      partition.points.emplace_back(samples.states[i][k], word.subword(k - mem + 1, mem));
    }
  }
  return partition;
}

void write_partition_csv(const PartitionExport& partition, const Alphabet& alphabet,
                         std::ostream& out) {
  out << (partition.dimension == 1 ? "x0,label" : "x0,x1,label") << '\n';
  char buf[64];
  for (const auto& [state, label] : partition.points) {
    for (int d = 0; d < partition.dimension; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", state[d]);
      out << buf << ',';
    }
    out << alphabet.render(label) << '\n';
  }
}

void write_refinement_csv(const RefinementReport& report, std::ostream& out) {
  out << "ell,d_adjacent,method_adjacent,d_vs_horizon,method_vs_horizon,states,transitions\n";
  for (const auto& level : report.levels) {
    out << level.memory << ',';
    if (level.d_adjacent) out << format_prob(*level.d_adjacent);
    out << ',' << level.method_adjacent << ',';
    if (level.d_vs_horizon) out << format_prob(*level.d_vs_horizon);
    out << ',' << level.method_vs_horizon << ',' << level.n_states << ','
        << level.n_transitions << '\n';
  }
}

std::string refinement_json(const RefinementReport& report, const RefinementConfig& cfg) {
  nlohmann::json j;
  j["final_memory"] = report.final_memory;
  j["termination"] = report.termination;
  if (report.termination == "capacity") {
    j["capacity_memory"] = report.capacity_memory;
    j["capacity_detail"] = report.capacity_detail;
  }
  j["config"] = {
      {"system", cfg.system.id()},
      {"trajectories", cfg.n_trajectories},
      {"length", cfg.word_length},
      {"horizon", cfg.horizon},
      {"threshold", cfg.threshold},
      {"max_memory", cfg.max_memory},
      {"seed", cfg.seed},
      {"mc_samples", cfg.mc_samples},
      {"support_cap", cfg.support_cap},
      {"resample_per_level", cfg.resample_per_level},
      {"report_vs_horizon", cfg.report_vs_horizon},
  };
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : report.levels) {
    nlohmann::json l;
    l["memory"] = level.memory;
    if (level.d_adjacent) {
      l["d_adjacent"] = *level.d_adjacent;
      l["method_adjacent"] = level.method_adjacent;
    }
    if (level.d_vs_horizon) {
      l["d_vs_horizon"] = *level.d_vs_horizon;
      l["method_vs_horizon"] = level.method_vs_horizon;
    }
    l["states"] = level.n_states;
    l["transitions"] = level.n_transitions;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j.dump(2);
}

}  // namespace memabs
