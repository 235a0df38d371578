#include "memabs/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "memabs/errors.hpp"

namespace memabs {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  // '#' starts a comment at the beginning of the line or after whitespace.
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' &&
        (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
      return line.substr(0, i);
    }
  }
  return line;
}

[[noreturn]] void fail_key(const ParsedConfig& cfg, const std::string& section,
                           const std::string& key, const std::string& what) {
  const auto* entry = cfg.find(section, key);
  std::string where = cfg.source;
  if (entry) where += ":" + std::to_string(entry->line);
  throw ConfigError(where + ": [" + section + "] " + key + ": " + what);
}

class ConfigReader {
 public:
  ConfigReader(const ParsedConfig& cfg, const std::string& section)
      : cfg_(cfg), section_(section) {}

  bool has(const std::string& key) const { return cfg_.find(section_, key) != nullptr; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    return entry ? trim(entry->value) : fallback;
  }

  double get_double(const std::string& key, double fallback) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return fallback;
    return parse_double(key, trim(entry->value));
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return fallback;
    const std::string text = trim(entry->value);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
      fail_key(cfg_, section_, key, "expected a nonnegative integer, got '" + text + "'");
    return v;
  }

  int get_int(const std::string& key, int fallback) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return fallback;
    const std::string text = trim(entry->value);
    int v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
      fail_key(cfg_, section_, key, "expected an integer, got '" + text + "'");
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return fallback;
    const std::string text = trim(entry->value);
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail_key(cfg_, section_, key, "expected a boolean, got '" + text + "'");
  }

  std::vector<double> get_doubles(const std::string& key) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return {};
    std::vector<double> values;
    std::istringstream in(entry->value);
    std::string token;
    while (in >> token) values.push_back(parse_double(key, token));
    return values;
  }

  std::vector<std::string> get_strings(const std::string& key) {
    used_.insert(key);
    const auto* entry = cfg_.find(section_, key);
    if (!entry) return {};
    std::vector<std::string> values;
    std::istringstream in(entry->value);
    std::string token;
    while (in >> token) values.push_back(token);
    return values;
  }

  /// Reject keys nobody consumed (typo protection).
  void check_unknown() const {
    auto it = cfg_.sections.find(section_);
    if (it == cfg_.sections.end()) return;
    for (const auto& [key, entry] : it->second) {
      if (!used_.count(key)) {
        throw ConfigError(cfg_.source + ":" + std::to_string(entry.line) + ": unknown key '" +
                          key + "' in [" + section_ + "]");
      }
    }
  }

 private:
  double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
      fail_key(cfg_, section_, key, "expected a number, got '" + text + "'");
    return v;
  }

  const ParsedConfig& cfg_;
  std::string section_;
  std::set<std::string> used_;
};

SystemSpec make_system(const ParsedConfig& cfg) {
  ConfigReader sys(cfg, "system");
  const std::string variant = sys.get_string("variant", "");
  if (variant.empty())
    throw ConfigError(cfg.source + ": [system] variant is required "
                      "(sturmian | switched-linear | piecewise-demo | table-driven)");

  SystemSpec spec = [&]() -> SystemSpec {
    if (variant == "sturmian") {
      const double theta = sys.get_double("theta", SystemSpec::default_sturmian_theta());
      return SystemSpec::sturmian(theta);
    }
    if (variant == "piecewise-demo") {
      return SystemSpec::piecewise_demo();
    }
    if (variant == "switched-linear") {
      SwitchedLinearParams params = SystemSpec::default_switched_params();
      params.switch_prob = sys.get_double("switch_prob", params.switch_prob);
      auto a1 = sys.get_doubles("a1");
      auto a2 = sys.get_doubles("a2");
      if (!a1.empty()) {
        if (a1.size() != 4)
          throw ConfigError(cfg.source + ": [system] a1 needs 4 row-major entries");
        params.a1 = Mat2{a1[0], a1[1], a1[2], a1[3]};
      }
      if (!a2.empty()) {
        if (a2.size() != 4)
          throw ConfigError(cfg.source + ": [system] a2 needs 4 row-major entries");
        params.a2 = Mat2{a2[0], a2[1], a2[2], a2[3]};
      }
      auto lo = sys.get_doubles("init_low");
      auto hi = sys.get_doubles("init_high");
      if (!lo.empty()) {
        if (lo.size() != 2)
          throw ConfigError(cfg.source + ": [system] init_low needs 2 entries");
        params.box_low = {lo[0], lo[1]};
      }
      if (!hi.empty()) {
        if (hi.size() != 2)
          throw ConfigError(cfg.source + ": [system] init_high needs 2 entries");
        params.box_high = {hi[0], hi[1]};
      }
      return SystemSpec::switched_linear(params);
    }
    if (variant == "table-driven") {
      TableDrivenParams params;
      const int n_states = sys.get_int("states", 0);
      if (n_states < 1)
        throw ConfigError(cfg.source + ": [system] states must be a positive count");
      params.state_labels = sys.get_strings("labels");
      for (int i = 0; i < n_states; ++i) {
        auto row = sys.get_doubles("row" + std::to_string(i));
        if (static_cast<int>(row.size()) != n_states)
          throw ConfigError(cfg.source + ": [system] row" + std::to_string(i) + " needs " +
                            std::to_string(n_states) + " entries");
        params.rows.push_back(std::move(row));
      }
      params.initial = sys.get_doubles("init");
      return SystemSpec::table_driven(std::move(params));
    }
    throw ConfigError(cfg.source + ": [system] unknown variant '" + variant + "'");
  }();

  auto point = sys.get_doubles("init_point");
  if (!point.empty()) {
    if (static_cast<int>(point.size()) != spec.dimension())
      throw ConfigError(cfg.source + ": [system] init_point needs " +
                        std::to_string(spec.dimension()) + " coordinates");
    State x{point[0], point.size() > 1 ? point[1] : 0.0};
    try {
      spec = spec.with_initial_point(x);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.source + ": [system] init_point: " + e.what());
    }
  }
  sys.check_unknown();
  return spec;
}

std::string render_system_section(const ParsedConfig& cfg) {
  std::ostringstream out;
  out << "[system]\n";
  auto it = cfg.sections.find("system");
  if (it != cfg.sections.end()) {
    for (const auto& [key, entry] : it->second) {
      out << key << " = " << trim(entry.value) << '\n';
    }
  }
  return out.str();
}

}  // namespace

const ParsedConfig::Entry* ParsedConfig::find(const std::string& section,
                                              const std::string& key) const {
  auto sit = sections.find(section);
  if (sit == sections.end()) return nullptr;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? nullptr : &kit->second;
}

ParsedConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  ParsedConfig cfg;
  cfg.source = path.string();
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(strip_comment(line));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ConfigError(cfg.source + ":" + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section.empty())
        throw ConfigError(cfg.source + ":" + std::to_string(line_no) + ": empty section name");
      cfg.sections[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(cfg.source + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    if (section.empty())
      throw ConfigError(cfg.source + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    const std::string key = trim(text.substr(0, eq));
    if (key.empty())
      throw ConfigError(cfg.source + ":" + std::to_string(line_no) + ": empty key");
    cfg.sections[section][key] = ParsedConfig::Entry{trim(text.substr(eq + 1)), line_no};
  }
  return cfg;
}

void apply_override(ParsedConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  const std::string path = trim(assignment.substr(0, eq));
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  cfg.sections[path.substr(0, dot)][path.substr(dot + 1)] =
      ParsedConfig::Entry{trim(assignment.substr(eq + 1)), 0};
}

DistanceMethod parse_method(const std::string& name) {
  if (name == "exact") return DistanceMethod::kExact;
  if (name == "monte-carlo") return DistanceMethod::kMonteCarlo;
  if (name == "auto") return DistanceMethod::kAuto;
  throw ConfigError("unknown method '" + name + "' (exact | monte-carlo | auto)");
}

RunConfig RunConfig::load(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  ParsedConfig parsed = parse_config_file(path);
  for (const auto& assignment : overrides) apply_override(parsed, assignment);

  for (const auto& [name, entries] : parsed.sections) {
    if (name != "system" && name != "sample" && name != "refine" && name != "output")
      throw ConfigError(parsed.source + ": unknown section [" + name + "]");
  }

  RunConfig cfg(make_system(parsed));
  cfg.system_section_text_ = render_system_section(parsed);

  ConfigReader sample(parsed, "sample");
  cfg.n_trajectories = sample.get_u64("trajectories", cfg.n_trajectories);
  cfg.word_length = sample.get_u64("length", cfg.word_length);
  cfg.seed = sample.get_u64("seed", cfg.seed);
  cfg.keep_states = sample.get_bool("keep_states", cfg.keep_states);
  cfg.max_letters = sample.get_u64("max_letters", cfg.max_letters);
  sample.check_unknown();

  ConfigReader refine(parsed, "refine");
  cfg.horizon = refine.get_u64("horizon", cfg.horizon);
  cfg.threshold = refine.get_double("threshold", cfg.threshold);
  cfg.max_memory = refine.get_int("max_memory", cfg.max_memory);
  cfg.method = parse_method(refine.get_string("method", "auto"));
  cfg.mc_samples = refine.get_u64("mc_samples", cfg.mc_samples);
  cfg.support_cap = refine.get_u64("support_cap", cfg.support_cap);
  cfg.resample_per_level = refine.get_bool("resample_per_level", cfg.resample_per_level);
  cfg.report_vs_horizon = refine.get_bool("report_vs_horizon", cfg.report_vs_horizon);
  cfg.export_partition = refine.get_bool("export_partition", cfg.export_partition);
  refine.check_unknown();

  ConfigReader output(parsed, "output");
  cfg.out_dir = output.get_string("dir", cfg.out_dir.string());
  cfg.write_samples = output.get_bool("write_samples", cfg.write_samples);
  output.check_unknown();

  if (cfg.word_length == 0)
    throw ConfigError(parsed.source + ": [sample] length must be at least 1");
  if (cfg.n_trajectories == 0)
    throw ConfigError(parsed.source + ": [sample] trajectories must be at least 1");
  return cfg;
}

RefinementConfig RunConfig::to_refinement() const {
  RefinementConfig cfg(system_);
  cfg.n_trajectories = n_trajectories;
  cfg.word_length = word_length;
  cfg.horizon = horizon;
  cfg.threshold = threshold;
  cfg.max_memory = max_memory;
  cfg.seed = seed;
  cfg.method = method;
  cfg.mc_samples = mc_samples;
  cfg.support_cap = support_cap;
  cfg.max_letters = max_letters;
  cfg.resample_per_level = resample_per_level;
  cfg.report_vs_horizon = report_vs_horizon;
  cfg.export_partition = export_partition;
  cfg.write_samples = write_samples;
  cfg.threads = threads;
  cfg.verbose = verbose;
  cfg.out_dir = out_dir;
  return cfg;
}

std::string RunConfig::resolved_text() const {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << system_section_text_;
  out << "\n[sample]\n";
  out << "trajectories = " << n_trajectories << '\n';
  out << "length = " << word_length << '\n';
  out << "seed = " << seed << '\n';
  out << "keep_states = " << (keep_states ? "true" : "false") << '\n';
  out << "max_letters = " << max_letters << '\n';
  out << "\n[refine]\n";
  out << "horizon = " << horizon << '\n';
  out << "threshold = " << fmt(threshold) << '\n';
  out << "max_memory = " << max_memory << '\n';
  out << "method = "
      << (method == DistanceMethod::kExact
              ? "exact"
              : method == DistanceMethod::kMonteCarlo ? "monte-carlo" : "auto")
      << '\n';
  out << "mc_samples = " << mc_samples << '\n';
  out << "support_cap = " << support_cap << '\n';
  out << "resample_per_level = " << (resample_per_level ? "true" : "false") << '\n';
  out << "report_vs_horizon = " << (report_vs_horizon ? "true" : "false") << '\n';
  out << "export_partition = " << (export_partition ? "true" : "false") << '\n';
  out << "\n[output]\n";
  out << "dir = " << out_dir.string() << '\n';
  out << "write_samples = " << (write_samples ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace memabs
