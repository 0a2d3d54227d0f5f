#ifndef SCM_CONFIG_HPP
#define SCM_CONFIG_HPP

// Simulation configuration: defaults, command-line flags, `key = value`
// config files, and the config echo written at the top of every output.
//
// Precedence is flag > config file > default. Every key is the kebab-case
// name of a SimulationConfig field and doubles as the flag name (--key).

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scm/sir_analysis.hpp"

namespace scm {

class UsageError : public std::invalid_argument {
 public:
  UsageError(std::string key, const std::string& msg)
      : std::invalid_argument(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct SimulationConfig {
  std::vector<LineCodeKind> codes{std::begin(kAllLineCodes), std::end(kAllLineCodes)};
  std::size_t n_channels = 10;  // spectrum command
  std::size_t n_min = 2;        // sweep range
  std::size_t n_max = 10;
  double base_freq = 1.0e6;
  double spacing = 200.0e3;
  double bandwidth = 200.0e3;
  double bit_rate = 100.0e3;
  double mod_index = 1.0;
  double sample_rate = 16.0e6;
  std::size_t fft_size = 131072;
  Window window = Window::Rectangular;
  std::size_t n_avg = 8;
  std::uint64_t seed = 42;
  double attenuation = 0.0;  // 1/km
  double length = 0.0;       // km
  double responsivity = 1.0;
  std::size_t report_channel = 1;
  std::size_t threads = 1;
  std::string output;  // empty: per-command default
  std::string input;   // compare: read an existing sweep CSV

  ChannelPlan plan(std::size_t n) const {
    ChannelPlan p;
    p.n_channels = n;
    p.base_freq = base_freq;
    p.spacing = spacing;
    p.bandwidth = bandwidth;
    p.mod_index = mod_index;
    p.bit_rate = bit_rate;
    p.sample_rate = sample_rate;
    return p;
  }

  SweepConfig sweep_config() const {
    SweepConfig s;
    s.codes = codes;
    s.n_min = n_min;
    s.n_max = n_max;
    s.plan = plan(n_max);
    s.spectral = {fft_size, window, n_avg};
    s.fiber = {attenuation, length};
    s.detector = {responsivity};
    s.seed = seed;
    s.report_channel = report_channel;
    s.threads = threads;
    return s;
  }

  void validate() const {
    if (codes.empty()) throw UsageError("codes", "at least one line code is required");
    if (n_channels < 1) throw UsageError("n-channels", "must be >= 1");
    if (n_min < 1) throw UsageError("n-min", "must be >= 1");
    if (n_max < n_min) throw UsageError("n-max", "must be >= n-min");
    if (!(mod_index > 0.0 && mod_index <= 1.0)) throw UsageError("mod-index", "must be in (0, 1]");
    if (!(bit_rate > 0.0)) throw UsageError("bit-rate", "must be > 0");
    if (!(spacing > 0.0)) throw UsageError("spacing", "must be > 0");
    if (!(bandwidth > 0.0)) throw UsageError("bandwidth", "must be > 0");
    if (!(base_freq - bandwidth / 2.0 > 0.0)) throw UsageError("base-freq", "must exceed bandwidth / 2");
    if (!(sample_rate > 0.0)) throw UsageError("sample-rate", "must be > 0");
    {
      const double spb = sample_rate / bit_rate;
      if (std::abs(spb - std::round(spb)) > 1e-9 * spb || std::llround(spb) % 2 != 0)
        throw UsageError("sample-rate", "sample-rate / bit-rate must be an even integer");
    }
    const double f_top = base_freq + static_cast<double>(std::max(n_max, n_channels) - 1) * spacing;
    if (!(sample_rate > 2.0 * (f_top + 2.0 * bit_rate)))
      throw UsageError("sample-rate", "too low for the highest subcarrier (Nyquist with guard)");
    if (f_top + bandwidth / 2.0 > sample_rate / 2.0)
      throw UsageError("bandwidth", "highest band exceeds the Nyquist frequency");
    if (!is_power_of_two(fft_size) || fft_size < 2) throw UsageError("fft-size", "must be a power of two");
    if (n_avg < 1) throw UsageError("n-avg", "must be >= 1");
    if (!(attenuation >= 0.0)) throw UsageError("attenuation", "must be >= 0");
    if (!(length >= 0.0)) throw UsageError("length", "must be >= 0");
    if (!(responsivity > 0.0)) throw UsageError("responsivity", "must be > 0");
    if (report_channel < 1 || report_channel > n_min)
      throw UsageError("report-channel", "must be in 1..n-min");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError(key, "expected a number, got '" + v + "'");
  }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw UsageError(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

inline std::vector<LineCodeKind> parse_codes(const std::string& key, const std::string& v) {
  if (v == "all") return {std::begin(kAllLineCodes), std::end(kAllLineCodes)};
  std::vector<LineCodeKind> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      const auto c = parse_line_code(item);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    } catch (const std::invalid_argument& e) {
      throw UsageError(key, e.what());
    }
  }
  if (out.empty()) throw UsageError(key, "no line codes given");
  std::sort(out.begin(), out.end());
  return out;
}

struct ConfigKey {
  std::string_view name;
  std::string_view help;
  bool echoed;  // part of the config echo
  std::function<void(SimulationConfig&, const std::string&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

#define SCM_SIZE_KEY(NAME, FIELD, HELP)                                                              \
  ConfigKey {                                                                                        \
    NAME, HELP, true,                                                                                \
        [](SimulationConfig& c, const std::string& v) { c.FIELD = static_cast<std::size_t>(parse_uint(NAME, v)); }, \
        [](const SimulationConfig& c) { return std::to_string(c.FIELD); }                           \
  }
#define SCM_DOUBLE_KEY(NAME, FIELD, HELP)                                                    \
  ConfigKey {                                                                                \
    NAME, HELP, true, [](SimulationConfig& c, const std::string& v) { c.FIELD = parse_double(NAME, v); }, \
        [](const SimulationConfig& c) { return format_number(c.FIELD); }                    \
  }

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      ConfigKey{"codes", "comma-separated line codes: nrz,manchester,miller or all", true,
                [](SimulationConfig& c, const std::string& v) { c.codes = parse_codes("codes", v); },
                [](const SimulationConfig& c) {
                  std::string s;
                  for (auto code : c.codes) s += (s.empty() ? "" : ",") + std::string(to_string(code));
                  return s;
                }},
      SCM_SIZE_KEY("n-channels", n_channels, "subcarrier count for the spectrum command"),
      SCM_SIZE_KEY("n-min", n_min, "smallest subcarrier count in a sweep"),
      SCM_SIZE_KEY("n-max", n_max, "largest subcarrier count in a sweep"),
      SCM_DOUBLE_KEY("base-freq", base_freq, "first subcarrier frequency, Hz"),
      SCM_DOUBLE_KEY("spacing", spacing, "subcarrier spacing, Hz"),
      SCM_DOUBLE_KEY("bandwidth", bandwidth, "per-channel band-pass bandwidth, Hz"),
      SCM_DOUBLE_KEY("bit-rate", bit_rate, "line-code bit rate, Hz"),
      SCM_DOUBLE_KEY("mod-index", mod_index, "optical modulation index in (0, 1]"),
      SCM_DOUBLE_KEY("sample-rate", sample_rate, "simulation sample rate, Hz"),
      SCM_SIZE_KEY("fft-size", fft_size, "periodogram length (power of two)"),
      ConfigKey{"window", "rectangular or hann", true,
                [](SimulationConfig& c, const std::string& v) {
                  try {
                    c.window = parse_window(v);
                  } catch (const std::invalid_argument& e) {
                    throw UsageError("window", e.what());
                  }
                },
                [](const SimulationConfig& c) { return std::string(to_string(c.window)); }},
      SCM_SIZE_KEY("n-avg", n_avg, "number of averaged periodogram segments"),
      ConfigKey{"seed", "base RNG seed; channel i uses seed + i - 1", true,
                [](SimulationConfig& c, const std::string& v) { c.seed = parse_uint("seed", v); },
                [](const SimulationConfig& c) { return std::to_string(c.seed); }},
      SCM_DOUBLE_KEY("attenuation", attenuation, "fiber attenuation coefficient, 1/km"),
      SCM_DOUBLE_KEY("length", length, "fiber length, km"),
      SCM_DOUBLE_KEY("responsivity", responsivity, "photodetector responsivity, A/W"),
      SCM_SIZE_KEY("report-channel", report_channel, "1-based channel reported by sweeps"),
      ConfigKey{"threads", "sweep worker threads (0 = all cores)", false,
                [](SimulationConfig& c, const std::string& v) {
                  c.threads = static_cast<std::size_t>(parse_uint("threads", v));
                },
                [](const SimulationConfig& c) { return std::to_string(c.threads); }},
      ConfigKey{"output", "output CSV path", false,
                [](SimulationConfig& c, const std::string& v) { c.output = v; },
                [](const SimulationConfig& c) { return c.output; }},
      ConfigKey{"input", "existing sweep CSV for the compare command", false,
                [](SimulationConfig& c, const std::string& v) { c.input = v; },
                [](const SimulationConfig& c) { return c.input; }},
  };
  return keys;
}

#undef SCM_SIZE_KEY
#undef SCM_DOUBLE_KEY

inline const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace detail

inline constexpr std::string_view kConfigEchoMarker = "# scm-sim config";

/// Header block written at the top of every output. Feeding a file that starts
/// with this block back through --config reproduces the run.
inline std::string config_echo(const SimulationConfig& cfg) {
  std::string out(kConfigEchoMarker);
  out += '\n';
  for (const auto& k : detail::config_keys()) {
    if (!k.echoed) continue;
    out += "# ";
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

/// Parses `key = value` lines. `#` starts a comment line. Text that begins
/// with the config-echo marker is read as an echo block instead: its `# key =
/// value` lines are entries and the first non-comment line ends the block.
inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  bool echo = false;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (first && !t.empty()) {
      first = false;
      if (t == kConfigEchoMarker) {
        echo = true;
        continue;
      }
    }
    if (t.empty()) continue;
    if (echo) {
      if (t.front() != '#') break;
      t = detail::trim(std::string_view(t).substr(1));
      if (t.empty()) continue;
    } else if (t.front() == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("", "config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (!detail::find_key(key)) throw UsageError(key, "unknown config key (line " + std::to_string(line_no) + ")");
    entries[key] = value;
  }
  return entries;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("config", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

/// Applies flag tokens (e.g. {"--spacing", "200000"}) on top of an optional
/// config file (given as --config PATH or `config_file`) on top of defaults.
inline SimulationConfig parse_config(const std::vector<std::string>& args,
                                     std::optional<std::string> config_file = std::nullopt) {
  CLI::App app{"scm-sim options"};
  app.allow_windows_style_options(false);
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& k : detail::config_keys()) {
    const std::string name(k.name);
    opts[name] = app.add_option("--" + name, flag_values[name], std::string(k.help));
  }
  std::string config_path;
  auto* config_opt = app.add_option("--config", config_path, "key = value config file or a previous output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError("", e.what());
  }
  if (config_opt->count() > 0) config_file = config_path;

  std::map<std::string, std::string> file_values;
  if (config_file) file_values = read_config_file(*config_file);

  SimulationConfig cfg;
  for (const auto& k : detail::config_keys()) {
    const std::string name(k.name);
    if (opts[name]->count() > 0)
      k.set(cfg, flag_values[name]);
    else if (auto it = file_values.find(name); it != file_values.end())
      k.set(cfg, it->second);
  }
  cfg.validate();
  return cfg;
}

}  // namespace scm

#endif  // SCM_CONFIG_HPP
