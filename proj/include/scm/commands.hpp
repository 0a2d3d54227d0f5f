#ifndef SCM_COMMANDS_HPP
#define SCM_COMMANDS_HPP

// Command dispatch for the scm-sim tool.
//
//   psd        line-code PSD of m(t), one CSV per code
//   spectrum   signal-part and cross-part PSDs at n-channels, two CSVs per code
//   sweep      SIR versus channel count (reporting and worst channel rows)
//   compare    code ranking and pairwise SIR gaps per channel count
//   calibrate  bit-rate x modulation-index grid against published SIR values
//
// Exit codes: 0 success, 1 usage error, 2 I/O error.

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "scm/calibration.hpp"
#include "scm/config.hpp"
#include "scm/csv.hpp"
#include "scm/linecode.hpp"
#include "scm/optical_chain.hpp"
#include "scm/psd_features.hpp"
#include "scm/sir_analysis.hpp"
#include "scm/spectral.hpp"

namespace scm {

enum class Command { Psd, Spectrum, Sweep, Compare, Calibrate };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::Psd: return "psd";
    case Command::Spectrum: return "spectrum";
    case Command::Sweep: return "sweep";
    case Command::Compare: return "compare";
    case Command::Calibrate: return "calibrate";
  }
  return "?";
}

inline Command parse_command(std::string_view name) {
  for (auto c : {Command::Psd, Command::Spectrum, Command::Sweep, Command::Compare, Command::Calibrate})
    if (to_string(c) == name) return c;
  throw UsageError("", "unknown command '" + std::string(name) + "'");
}

/// Bit rates and modulation indices scanned by the calibrate command.
inline const std::vector<double> kCalibrationBitRates = {50.0e3, 100.0e3, 200.0e3};
inline const std::vector<double> kCalibrationModIndices = {0.5, 1.0};

namespace detail {

inline std::filesystem::path output_path(const SimulationConfig& cfg, Command cmd) {
  if (!cfg.output.empty()) return cfg.output;
  return "scm_" + std::string(to_string(cmd)) + ".csv";
}

/// `out.csv` + "_nrz" -> `out_nrz.csv`
inline std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  auto ext = base.extension();
  if (ext.empty()) ext = ".csv";
  auto stem = base;
  stem.replace_extension();
  stem += suffix;
  stem += ext;
  return stem;
}

}  // namespace detail

/// Runs a command and returns the paths written. Throws UsageError for bad
/// configurations and IoError for filesystem failures.
inline std::vector<std::filesystem::path> run_command(const SimulationConfig& cfg, Command cmd,
                                                      std::ostream& log) {
  cfg.validate();
  const std::string echo = config_echo(cfg);
  const auto out_path = detail::output_path(cfg, cmd);
  std::vector<std::filesystem::path> written;

  switch (cmd) {
    case Command::Psd: {
      const ChannelPlan plan = cfg.plan(1);
      const std::size_t spb = plan.samples_per_bit();
      const std::size_t n_bits = plan.bits_for(cfg.fft_size * cfg.n_avg);
      const auto bits = generate_bits(n_bits, cfg.seed);
      for (auto code : cfg.codes) {
        const auto m = encode(bits, code, spb, cfg.sample_rate);
        const auto psd = estimate_psd(m.samples, cfg.sample_rate, cfg.fft_size, cfg.window, cfg.n_avg);
        const auto check = check_psd_features(psd, reference_psd_features(code, cfg.bit_rate));
        log << to_string(code) << ": peak " << format_number(check.peak_freq) << " Hz, DC "
            << format_number(check.dc_rel_db) << " dB rel. peak, landmarks "
            << (check.passed ? "ok" : "MISMATCH") << '\n';
        const auto path = detail::with_suffix(out_path, "_" + std::string(to_string(code)));
        write_file_atomic(path, psd_csv(echo, psd));
        written.push_back(path);
      }
      break;
    }
    case Command::Spectrum: {
      const auto sc = cfg.sweep_config();
      const ChannelPlan plan = cfg.plan(cfg.n_channels);
      const std::size_t n_samples = plan.bits_for(cfg.fft_size * cfg.n_avg) * plan.samples_per_bit();
      for (auto code : cfg.codes) {
        const auto fields = apply_fiber(assemble_channel(plan, code, cfg.seed, n_samples), sc.fiber);
        const auto spectra = component_spectra(photodetect(fields, sc.detector), sc.spectral);
        const std::string tag = "_" + std::string(to_string(code));
        const auto sig = detail::with_suffix(out_path, tag + "_signal");
        const auto cross = detail::with_suffix(out_path, tag + "_cross");
        write_file_atomic(sig, psd_csv(echo, spectra.signal));
        write_file_atomic(cross, psd_csv(echo, spectra.cross));
        written.push_back(sig);
        written.push_back(cross);
      }
      break;
    }
    case Command::Sweep: {
      const auto result = sweep(cfg.sweep_config());
      write_file_atomic(out_path, sweep_csv(echo, result));
      written.push_back(out_path);
      break;
    }
    case Command::Compare: {
      const auto result = cfg.input.empty() ? sweep(cfg.sweep_config()) : read_sweep_csv(cfg.input);
      const auto cmp = compare_codes(result);
      for (const auto& r : cmp.rows) {
        log << "n=" << r.n_channels << ':';
        for (std::size_t i = 0; i < r.ranking.size(); ++i) log << (i ? " > " : " ") << to_string(r.ranking[i]);
        log << '\n';
      }
      write_file_atomic(out_path, comparison_csv(echo, cmp));
      written.push_back(out_path);
      break;
    }
    case Command::Calibrate: {
      const auto rep = calibrate(cfg.sweep_config(), kCalibrationBitRates, kCalibrationModIndices);
      const auto& best = rep.rows[rep.best];
      log << "closest setting: bit-rate " << format_number(best.bit_rate) << " Hz, mod-index "
          << format_number(best.mod_index) << ", rms error " << format_number(best.rms_error_db) << " dB\n";
      for (const auto& g : rep.gaps)
        log << to_string(g.target.a) << " - " << to_string(g.target.b) << " at n=" << g.target.n_channels
            << ": " << format_number(g.measured_db) << " dB (expected " << format_number(g.target.gap_db)
            << " +/- " << format_number(g.target.tolerance_db) << ") " << (g.passed ? "ok" : "MISMATCH")
            << '\n';
      write_file_atomic(out_path, calibration_csv(echo, rep));
      written.push_back(out_path);
      break;
    }
  }
  return written;
}

inline void print_usage(std::ostream& os) {
  os << "usage: scm-sim <psd|spectrum|sweep|compare|calibrate> [--config FILE] [--key value ...]\n\noptions:\n";
  for (const auto& k : detail::config_keys()) os << "  --" << k.name << "  " << k.help << '\n';
  os << "  --config  key = value config file, or any output of a previous run\n";
}

/// Entry point shared by the tool and the tests. `args` excludes argv[0].
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args.front() == "--help" || args.front() == "-h") {
    print_usage(args.empty() ? err : out);
    return args.empty() ? kExitUsage : kExitOk;
  }
  try {
    const Command cmd = parse_command(args.front());
    const auto cfg = parse_config({args.begin() + 1, args.end()});
    for (const auto& p : run_command(cfg, cmd, out)) out << "wrote " << p.string() << '\n';
    return kExitOk;
  } catch (const IoError& e) {
    err << "scm-sim: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "scm-sim: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "scm-sim: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "scm-sim: I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace scm

#endif  // SCM_COMMANDS_HPP
