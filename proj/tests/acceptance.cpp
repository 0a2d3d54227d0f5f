// Acceptance suite. Runs every criterion (or one, with --criterion N) and
// prints one PASS/FAIL line per criterion followed by its measurements.
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scm/scm.hpp"

namespace {

using namespace scm;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) passed = false;
    notes.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

SweepConfig default_sweep() { return parse_config({}).sweep_config(); }

// Full default sweep (n = 2..10, all codes), shared by criteria 5 and 6.
const SirSweepResult& default_sweep_result(double* elapsed = nullptr) {
  static double took = 0.0;
  static const SirSweepResult result = [] {
    const auto t0 = Clock::now();
    auto r = sweep(default_sweep());
    took = seconds_since(t0);
    return r;
  }();
  if (elapsed) *elapsed = took;
  return result;
}

void print_sir_table(Outcome& o, const SirSweepResult& r) {
  for (auto code : kAllLineCodes) {
    std::string row = std::string(to_string(code)) + ":";
    for (std::size_t n = r.config.n_min; n <= r.config.n_max; ++n)
      row += " " + fmt(r.reporting_point(code, n)->sir_db, 2);
    o.note(row);
  }
}

// 1. total = R (signal + cross) elementwise for 100 random configurations.
Outcome decomposition_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ChannelPlan plan;
    plan.n_channels = 1 + trial % 10;
    plan.bit_rate = std::array{50e3, 100e3, 200e3}[rng() % 3];
    plan.spacing = 2.0 * plan.bit_rate;
    plan.bandwidth = plan.spacing;
    plan.base_freq = 5.0 * plan.spacing;
    plan.sample_rate = plan.bit_rate * static_cast<double>(64 + 2 * (rng() % 33));
    plan.mod_index = 0.05 + 0.95 * u01(rng);
    const auto code = kAllLineCodes[trial % 3];
    const FiberParams fiber{0.5 * u01(rng), 4.0 * u01(rng)};
    const DetectorParams det{0.1 + 4.9 * u01(rng)};
    const auto fs = apply_fiber(assemble_channel(plan, code, rng(), 64 * plan.samples_per_bit()), fiber);
    const auto d = photodetect(fs, det);
    for (std::size_t k = 0; k < d.total.size(); ++k)
      worst = std::max(worst, oracle::rel_err(d.total[k], det.responsivity * (d.signal_part[k] + d.cross_part[k])));
  }
  const double took = seconds_since(t0);
  o.require(worst <= 1e-10, "max relative error " + fmt(worst * 1e16, 2) + "e-16 <= 1e-10");
  o.require(took < 10.0, "runtime " + fmt(took, 2) + " s < 10 s");
  return o;
}

// 2. n = 1 has no beat interference for any code.
Outcome single_channel_null() {
  Outcome o;
  const auto cfg = default_sweep();
  for (auto code : kAllLineCodes) {
    const auto p = simulate_all_channels(cfg, code, 1).front();
    o.require(p.cross_band_power < 1e-12 * p.signal_band_power,
              std::string(to_string(code)) + ": cross " + format_number(p.cross_band_power) + " vs signal " +
                  format_number(p.signal_band_power));
  }
  return o;
}

// 3. Parseval for the rectangular single-segment periodogram.
Outcome parseval() {
  Outcome o;
  std::mt19937_64 rng(31415);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::size_t{1} << (8 + rng() % 10);
    std::vector<double> x(n);
    switch (trial % 4) {
      case 0: {
        std::normal_distribution<double> g(0.5, 2.0);
        for (auto& v : x) v = g(rng);
        break;
      }
      case 1: {
        std::uniform_real_distribution<double> u(-3.0, 7.0);
        for (auto& v : x) v = u(rng);
        break;
      }
      case 2: {
        x = encode(generate_bits(n / 8, rng()), kAllLineCodes[rng() % 3], 8).samples;
        break;
      }
      default: {
        ChannelPlan plan;
        plan.n_channels = 3;
        const auto d = photodetect(assemble_channel(plan, LineCodeKind::Miller, rng(), n / 160 * 160 + 160), {});
        x.assign(d.cross_part.begin(), d.cross_part.begin() + static_cast<std::ptrdiff_t>(n));
      }
    }
    const auto psd = estimate_psd(x, 1.0, n, Window::Rectangular, 1);
    worst = std::max(worst, oracle::rel_err(total_power(psd), mean_square(x)));
  }
  o.require(worst <= 1e-6, "max relative error " + format_number(worst) + " <= 1e-6 over 20 inputs");
  return o;
}

// 4. Long-run periodogram landmarks of the three line codes.
Outcome line_code_landmarks() {
  Outcome o;
  const auto t0 = Clock::now();
  const double bit_rate = 100e3;
  const std::size_t spb = 16;
  const double fs = bit_rate * spb;
  const std::size_t fft = 16384;
  const auto bits = generate_bits(100000, 4);
  for (auto code : kAllLineCodes) {
    const auto w = encode(bits, code, spb, fs);
    const auto psd = estimate_psd(w.samples, fs, fft, Window::Rectangular, w.samples.size() / fft);
    const auto ref = reference_psd_features(code, bit_rate);
    const auto c = check_psd_features(psd, ref, 20.0);
    std::string detail = std::string(to_string(code)) + ": peak " + fmt(c.peak_freq / bit_rate) + " x bit_rate, DC " +
                         fmt(c.dc_rel_db, 1) + " dB";
    for (std::size_t i = 0; i < c.null_rel_db.size(); ++i)
      detail += ", null@" + fmt(ref.null_freqs[i] / 1e3, 0) + "kHz " + fmt(c.null_rel_db[i], 1) + " dB";
    for (const auto& f : c.failures) detail += " [" + f + "]";
    o.require(c.passed, detail);
  }
  const double took = seconds_since(t0);
  o.require(took < 30.0, "runtime " + fmt(took, 2) + " s < 30 s");
  return o;
}

// 5. Miller > NRZ > Manchester at every n in 2..10, separated by >= 1 dB.
Outcome code_ranking() {
  Outcome o;
  double took = 0.0;
  const auto& r = default_sweep_result(&took);
  using enum LineCodeKind;
  for (std::size_t n = 2; n <= 10; ++n) {
    const double mil = r.reporting_point(Miller, n)->sir_db;
    const double nrz = r.reporting_point(NRZ, n)->sir_db;
    const double man = r.reporting_point(Manchester, n)->sir_db;
    o.require(mil - nrz >= 1.0 && nrz - man >= 1.0,
              "n=" + std::to_string(n) + ": miller " + fmt(mil, 2) + ", nrz " + fmt(nrz, 2) + ", manchester " +
                  fmt(man, 2) + " dB (miller-nrz " + fmt(mil - nrz, 2) + ", nrz-manchester " + fmt(nrz - man, 2) +
                  "; need >= 1 dB each)");
  }
  o.require(took < 60.0, "27-point sweep runtime " + fmt(took, 2) + " s < 60 s");
  return o;
}

// 6. Reporting-channel SIR is non-increasing in n (0.5 dB jitter allowed).
Outcome trend() {
  Outcome o;
  const auto& r = default_sweep_result();
  for (auto code : kAllLineCodes) {
    double worst_rise = -1e9;
    for (std::size_t n = 3; n <= 10; ++n)
      worst_rise = std::max(worst_rise, r.reporting_point(code, n)->sir_db - r.reporting_point(code, n - 1)->sir_db);
    o.require(worst_rise <= 0.5, std::string(to_string(code)) + ": largest step-to-step rise " +
                                     fmt(worst_rise, 3) + " dB <= 0.5 dB");
  }
  print_sir_table(o, r);
  return o;
}

// 7. Calibration grid against the published values; pairwise gaps at n = 2.
Outcome calibration() {
  Outcome o;
  const auto rep = calibrate(default_sweep(), kCalibrationBitRates, kCalibrationModIndices);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    std::string line = "bit_rate " + fmt(row.bit_rate / 1e3, 0) + " kb/s, mu " + fmt(row.mod_index, 1) + ":";
    for (std::size_t t = 0; t < rep.targets.size(); ++t)
      line += " " + std::string(to_string(rep.targets[t].code)) + "@" + std::to_string(rep.targets[t].n_channels) +
              "=" + fmt(row.sir_db[t], 2) + "(" + fmt(rep.targets[t].sir_db, 0) + ")";
    line += "  rms " + fmt(row.rms_error_db, 2) + " dB" + (i == rep.best ? "  <- closest" : "");
    o.note(line);
  }
  o.require(rep.rows.size() == 6, "calibration grid covers bit_rate {50,100,200} kb/s x mu {0.5,1.0}");
  const auto& best = rep.rows[rep.best];
  o.note("absolute values at the closest setting differ from the published ones by " + fmt(best.rms_error_db, 2) +
         " dB rms (documented, not gated)");
  for (const auto& g : rep.gaps)
    o.require(g.passed, std::string(to_string(g.target.a)) + " - " + std::string(to_string(g.target.b)) +
                            " at n=2: " + fmt(g.measured_db, 2) + " dB, expected " + fmt(g.target.gap_db, 0) +
                            " +/- " + fmt(g.target.tolerance_db, 0) + " dB");
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// 8. SIR invariance to global scale; reproducible and parallel-safe output.
Outcome invariance() {
  Outcome o;
  const auto base_cfg = default_sweep();
  const auto& base = default_sweep_result();
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0})
    for (double al : {0.0, std::log(2.0)}) {
      if (r == 1.0 && al == 0.0) continue;
      auto cfg = base_cfg;
      cfg.detector.responsivity = r;
      cfg.fiber = {al, 1.0};
      const auto res = sweep(cfg);
      for (std::size_t i = 0; i < res.points.size(); ++i)
        worst = std::max(worst, std::abs(res.points[i].sir_db - base.points[i].sir_db));
    }
  o.require(worst < 1e-6, "max |delta SIR| over R {0.5,1,2} x alpha*L {0, ln 2}: " + format_number(worst) + " dB < 1e-6 dB");

  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "scm_acceptance_c8";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto run = [&](const std::string& name, const std::string& threads) {
    std::ostringstream out, err;
    const int rc = run_cli({"sweep", "--threads", threads, "--output", (dir / name).string()}, out, err);
    return rc == 0 ? slurp(dir / name) : std::string("error: ") + err.str();
  };
  const auto a = run("a.csv", "1");
  const auto b = run("b.csv", "1");
  const auto c = run("c.csv", "4");
  o.require(!a.empty() && a == b, "identical seeds give byte-identical sweep CSVs (" + std::to_string(a.size()) + " bytes)");
  o.require(a == c, "parallel (4 threads) and serial sweeps give byte-identical CSVs");
  fs::remove_all(dir);
  return o;
}

// 9. Miller encoder against an explicit four-state table, all strings up to 12 bits.
Outcome miller_oracle() {
  Outcome o;
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t len = 1; len <= 12; ++len)
    for (std::uint32_t word = 0; word < (1u << len); ++word) {
      BitSequence b;
      b.bits.resize(len);
      for (std::size_t i = 0; i < len; ++i) b.bits[i] = (word >> (len - 1 - i)) & 1u;
      const auto expect = oracle::miller_half_bits(b.bits);
      // Two samples per bit: one per half bit.
      if (encode(b, LineCodeKind::Miller, 2).samples != expect) ++mismatches;
      ++checked;
    }
  o.require(checked == 8190 && mismatches == 0,
            std::to_string(checked) + " bit strings compared, " + std::to_string(mismatches) + " mismatches");
  return o;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "decomposition identity", decomposition_identity},
      {2, "single-channel null interference", single_channel_null},
      {3, "Parseval normalization", parseval},
      {4, "line-code PSD landmarks", line_code_landmarks},
      {5, "code ranking Miller > NRZ > Manchester", code_ranking},
      {6, "SIR trend versus channel count", trend},
      {7, "calibration against published values", calibration},
      {8, "invariance and reproducibility", invariance},
      {9, "Miller encoder exhaustive oracle", miller_oracle},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) only = std::stoi(argv[++i]);
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes.push_back(std::string("FAIL exception: ") + e.what());
    }
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.name << '\n';
    for (const auto& n : o.notes) std::cout << "         " << n << '\n';
    std::cout.flush();
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
