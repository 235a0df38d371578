#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memabs/config.hpp"
#include "memabs/distance.hpp"
#include "memabs/errors.hpp"
#include "memabs/model.hpp"
#include "memabs/refine.hpp"
#include "memabs/sampler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int threads = 1;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "Configuration file")->required();
  cmd->add_option("--set", args.overrides, "Override a scalar key (section.key=value)");
  cmd->add_option("-o,--out", args.out_dir, "Output directory (overrides [output] dir)");
  cmd->add_option("--threads", args.threads, "Worker cap, 0 = auto")->default_val(1);
  cmd->add_flag("-v,--verbose", args.verbose, "Progress notes on stderr");
}

memabs::RunConfig load_config(const CommonArgs& args) {
  memabs::RunConfig cfg = memabs::RunConfig::load(args.config_path, args.overrides);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  cfg.threads = args.threads;
  cfg.verbose = args.verbose;
  return cfg;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw memabs::IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void prepare_out_dir(const memabs::RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec)
    throw memabs::IoError("cannot create '" + cfg.out_dir.string() + "': " + ec.message());
  auto out = open_out(cfg.out_dir / "resolved.cfg");
  out << cfg.resolved_text();
}

int cmd_simulate(const CommonArgs& args) {
  memabs::RunConfig cfg = load_config(args);
  prepare_out_dir(cfg);
  memabs::SampleSet samples =
      memabs::simulate(cfg.system(), cfg.n_trajectories, cfg.word_length, cfg.seed,
                       cfg.keep_states, {cfg.max_letters, cfg.threads});
  {
    auto out = open_out(cfg.out_dir / "samples.txt");
    memabs::write_words(samples, out);
  }
  if (cfg.keep_states) {
    auto out = open_out(cfg.out_dir / "states.csv");
    memabs::write_states_csv(samples, out);
  }
  if (cfg.verbose)
    std::cerr << "wrote " << samples.words.size() << " words to "
              << (cfg.out_dir / "samples.txt").string() << '\n';
  return kExitOk;
}

int cmd_build(const CommonArgs& args, int memory) {
  memabs::RunConfig cfg = load_config(args);
  prepare_out_dir(cfg);
  memabs::SampleSet samples =
      memabs::simulate(cfg.system(), cfg.n_trajectories, cfg.word_length, cfg.seed,
                       /*keep_states=*/false, {cfg.max_letters, cfg.threads});
  memabs::MemoryMarkovModel model = memabs::build_model(samples, memory);
  memabs::write_model_file(model, cfg.out_dir / ("model_" + std::to_string(memory) + ".txt"));
  if (cfg.write_samples) {
    auto out = open_out(cfg.out_dir / "samples.txt");
    memabs::write_words(samples, out);
  }
  return kExitOk;
}

int cmd_distance(const std::string& path1, const std::string& path2, std::size_t horizon,
                 const std::string& method, std::size_t mc_samples, std::size_t support_cap,
                 std::uint64_t mc_seed) {
  memabs::MemoryMarkovModel m1 = memabs::read_model_file(path1);
  memabs::MemoryMarkovModel m2 = memabs::read_model_file(path2);
  memabs::DistanceOptions options;
  options.method = memabs::parse_method(method);
  options.mc_samples = mc_samples;
  options.support_cap = support_cap;
  options.mc_seed = mc_seed;
  memabs::DistanceReport report = memabs::distance(m1, m2, horizon, options);
  std::cout << memabs::distance_csv_header() << '\n'
            << memabs::distance_csv_row(report) << '\n';
  return kExitOk;
}

int cmd_refine(const CommonArgs& args) {
  memabs::RunConfig cfg = load_config(args);
  prepare_out_dir(cfg);
  memabs::RefinementConfig refinement = cfg.to_refinement();
  memabs::RefinementReport report = memabs::run_refinement(refinement);
  if (cfg.verbose)
    std::cerr << "terminated (" << report.termination << ") at memory "
              << report.final_memory << '\n';
  return report.termination == "capacity" ? kExitCapacity : kExitOk;
}

int cmd_export_partition(const CommonArgs& args, int memory) {
  memabs::RunConfig cfg = load_config(args);
  prepare_out_dir(cfg);
  memabs::SampleSet samples =
      memabs::simulate(cfg.system(), cfg.n_trajectories, cfg.word_length, cfg.seed,
                       /*keep_states=*/true, {cfg.max_letters, cfg.threads});
  memabs::PartitionExport partition = memabs::export_partition(samples, memory);
  auto out = open_out(cfg.out_dir / ("partition_" + std::to_string(memory) + ".csv"));
  memabs::write_partition_csv(partition, samples.alphabet, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-based Markov abstractions of dynamical systems"};
  app.require_subcommand(1);

  CommonArgs simulate_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Sample trajectories to samples.txt");
  add_common(simulate, simulate_args);

  CommonArgs build_args;
  int build_memory = 1;
  CLI::App* build = app.add_subcommand("build", "Sample and estimate one model");
  add_common(build, build_args);
  build->add_option("-m,--memory", build_memory, "Memory length")->required();

  std::string model1, model2, method = "exact";
  std::size_t horizon = 0, mc_samples = 100'000, support_cap = memabs::kDefaultSupportCap;
  std::uint64_t mc_seed = 0x6d656d616273ull;
  CLI::App* dist = app.add_subcommand("distance", "Behavioural distance of two model files");
  dist->add_option("model1", model1, "First model file")->required();
  dist->add_option("model2", model2, "Second model file")->required();
  dist->add_option("-H,--horizon", horizon, "Horizon in letters")->required();
  dist->add_option("--method", method, "exact | monte-carlo | auto")->default_val("exact");
  dist->add_option("--mc-samples", mc_samples, "Monte-Carlo sample count");
  dist->add_option("--support-cap", support_cap, "Exact-unroll support cap");
  dist->add_option("--mc-seed", mc_seed, "Monte-Carlo seed");

  CommonArgs refine_args;
  CLI::App* refine = app.add_subcommand("refine", "Iterative memory refinement");
  add_common(refine, refine_args);

  CommonArgs partition_args;
  int partition_memory = 1;
  CLI::App* partition =
      app.add_subcommand("export-partition", "Sampled state-space partition for one memory");
  add_common(partition, partition_args);
  partition->add_option("-m,--memory", partition_memory, "Memory length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(simulate_args);
    if (build->parsed()) return cmd_build(build_args, build_memory);
    if (dist->parsed())
      return cmd_distance(model1, model2, horizon, method, mc_samples, support_cap, mc_seed);
    if (refine->parsed()) return cmd_refine(refine_args);
    if (partition->parsed()) return cmd_export_partition(partition_args, partition_memory);
  } catch (const memabs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const memabs::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const memabs::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
