#ifndef SCM_SIR_ANALYSIS_HPP
#define SCM_SIR_ANALYSIS_HPP

// Signal-to-interference ratio of a subcarrier band, and sweeps of it over
// line code and channel count.
//
// SIR for channel i is the in-band power of the signal part divided by the
// in-band power of the cross (beat) part, both measured over
// [f_i - B/2, f_i + B/2) on averaged periodograms.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "scm/linecode.hpp"
#include "scm/optical_chain.hpp"
#include "scm/spectral.hpp"

namespace scm {

/// Cross power below this fraction of the signal power reports an infinite SIR.
inline constexpr double kInfiniteSirRatio = 1e-12;

enum class PointRole { Reporting, Worst };

struct SirPoint {
  LineCodeKind code = LineCodeKind::NRZ;
  std::size_t n_channels = 0;
  std::size_t channel_index = 0;  // 1-based
  double signal_band_power = 0.0;
  double cross_band_power = 0.0;
  double sir_db = 0.0;  // +inf when the cross power is negligible
  PointRole role = PointRole::Reporting;

  bool is_infinite() const noexcept { return std::isinf(sir_db) && sir_db > 0; }
};

inline double sir_db_from_powers(double signal, double cross) {
  if (cross < kInfiniteSirRatio * signal) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / cross);
}

struct ComponentSpectra {
  PsdEstimate signal;
  PsdEstimate cross;
  ChannelPlan plan;
  LineCodeKind code = LineCodeKind::NRZ;
};

inline ComponentSpectra component_spectra(const PhotocurrentDecomposition& d,
                                          const SpectralConfig& cfg) {
  return {estimate_psd(d.signal_part, d.sample_rate, cfg), estimate_psd(d.cross_part, d.sample_rate, cfg),
          d.plan, d.code};
}

inline SirPoint channel_sir(const ComponentSpectra& spectra, std::size_t channel_index) {
  const auto& plan = spectra.plan;
  if (channel_index < 1 || channel_index > plan.n_channels)
    throw std::invalid_argument("channel_sir: channel index " + std::to_string(channel_index) +
                                " outside 1.." + std::to_string(plan.n_channels));
  SirPoint p;
  p.code = spectra.code;
  p.n_channels = plan.n_channels;
  p.channel_index = channel_index;
  const double fc = plan.carrier_freq(channel_index);
  p.signal_band_power = band_power(spectra.signal, fc, plan.bandwidth);
  p.cross_band_power = band_power(spectra.cross, fc, plan.bandwidth);
  p.sir_db = sir_db_from_powers(p.signal_band_power, p.cross_band_power);
  return p;
}

inline SirPoint channel_sir(const PhotocurrentDecomposition& d, const ChannelPlan& plan,
                            std::size_t channel_index, const SpectralConfig& cfg) {
  if (channel_index < 1 || channel_index > plan.n_channels)
    throw std::invalid_argument("channel_sir: channel index " + std::to_string(channel_index) +
                                " outside 1.." + std::to_string(plan.n_channels));
  auto spectra = component_spectra(d, cfg);
  spectra.plan = plan;
  return channel_sir(spectra, channel_index);
}

/// Everything that determines a sweep's output.
struct SweepConfig {
  std::vector<LineCodeKind> codes{std::begin(kAllLineCodes), std::end(kAllLineCodes)};
  std::size_t n_min = 2;
  std::size_t n_max = 10;
  ChannelPlan plan;  // n_channels is overridden per sweep point
  SpectralConfig spectral;
  FiberParams fiber;
  DetectorParams detector;
  std::uint64_t seed = 42;
  std::size_t report_channel = 1;
  std::size_t threads = 1;  // 0 = hardware concurrency; does not affect results

  /// Samples per realization: whole bits covering fft_size * n_avg samples.
  std::size_t n_samples() const noexcept {
    return plan.bits_for(spectral.fft_size * spectral.n_avg) * plan.samples_per_bit();
  }

  void validate() const {
    if (codes.empty()) throw std::invalid_argument("sweep: no line codes selected");
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("sweep: need 1 <= n_min <= n_max");
    if (report_channel < 1 || report_channel > n_min)
      throw std::invalid_argument("sweep: report channel must be in 1..n_min");
    ChannelPlan at_max = plan;
    at_max.n_channels = n_max;
    at_max.validate();
    fiber.validate();
    detector.validate();
    if (!is_power_of_two(spectral.fft_size)) throw std::invalid_argument("sweep: fft_size must be a power of two");
    if (spectral.n_avg < 1) throw std::invalid_argument("sweep: n_avg must be >= 1");
    const double top = at_max.highest_carrier() + at_max.bandwidth / 2.0;
    if (top > at_max.sample_rate / 2.0) throw std::invalid_argument("sweep: highest band exceeds Nyquist");
  }
};

struct SirSweepResult {
  std::vector<SirPoint> points;  // sorted by (code, n_channels, channel_index, role)
  SweepConfig config;

  std::vector<SirPoint> reporting() const {
    std::vector<SirPoint> out;
    for (const auto& p : points)
      if (p.role == PointRole::Reporting) out.push_back(p);
    return out;
  }

  /// Reporting-channel point for (code, n), if present.
  std::optional<SirPoint> reporting_point(LineCodeKind code, std::size_t n) const {
    for (const auto& p : points)
      if (p.role == PointRole::Reporting && p.code == code && p.n_channels == n) return p;
    return std::nullopt;
  }
};

inline bool point_less(const SirPoint& a, const SirPoint& b) {
  return std::tuple(static_cast<int>(a.code), a.n_channels, a.channel_index, static_cast<int>(a.role)) <
         std::tuple(static_cast<int>(b.code), b.n_channels, b.channel_index, static_cast<int>(b.role));
}

/// Runs one realization and returns the SIR of every channel.
inline std::vector<SirPoint> simulate_all_channels(const SweepConfig& cfg, LineCodeKind code, std::size_t n) {
  ChannelPlan plan = cfg.plan;
  plan.n_channels = n;
  auto fields = apply_fiber(assemble_channel(plan, code, cfg.seed, cfg.n_samples()), cfg.fiber);
  const auto decomp = photodetect(fields, cfg.detector);
  fields = FieldSet{};
  const auto spectra = component_spectra(decomp, cfg.spectral);
  std::vector<SirPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) pts.push_back(channel_sir(spectra, i));
  return pts;
}

/// For each code and channel count, one reporting-channel point and one
/// worst-channel point (minimum SIR, lowest index on ties).
inline SirSweepResult sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Job {
    LineCodeKind code;
    std::size_t n;
  };
  std::vector<Job> jobs;
  for (auto code : cfg.codes)
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) jobs.push_back({code, n});

  std::vector<std::vector<SirPoint>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto all = simulate_all_channels(cfg, jobs[j].code, jobs[j].n);
        SirPoint rep = all[cfg.report_channel - 1];
        rep.role = PointRole::Reporting;
        SirPoint worst = all.front();
        for (const auto& p : all)
          if (p.sir_db < worst.sir_db) worst = p;
        worst.role = PointRole::Worst;
        results[j] = {rep, worst};
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  std::size_t n_threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  n_threads = std::min(n_threads, jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SirSweepResult out;
  out.config = cfg;
  for (auto& r : results) out.points.insert(out.points.end(), r.begin(), r.end());
  std::stable_sort(out.points.begin(), out.points.end(), point_less);
  return out;
}

/// Order in which codes are ranked against each other when reporting gaps.
inline constexpr LineCodeKind kComparisonOrder[] = {LineCodeKind::Miller, LineCodeKind::NRZ,
                                                    LineCodeKind::Manchester};

struct SirGap {
  LineCodeKind a;
  LineCodeKind b;
  double db;  // SIR(a) - SIR(b)
};

struct CodeRanking {
  std::size_t n_channels = 0;
  std::vector<LineCodeKind> ranking;  // best SIR first
  std::vector<SirGap> gaps;           // all pairs in kComparisonOrder order
};

struct CodeComparison {
  std::vector<LineCodeKind> codes;  // in kComparisonOrder order
  std::vector<CodeRanking> rows;    // ascending n_channels
};

/// Ranks the reporting-channel SIR of every code at every channel count.
inline CodeComparison compare_codes(const SirSweepResult& result) {
  std::map<LineCodeKind, std::map<std::size_t, double>> table;
  for (const auto& p : result.points)
    if (p.role == PointRole::Reporting) table[p.code][p.n_channels] = p.sir_db;
  if (table.size() < 2) throw std::invalid_argument("compare_codes: need at least two line codes");

  CodeComparison cmp;
  for (auto c : kComparisonOrder)
    if (table.count(c)) cmp.codes.push_back(c);
  const auto& ns = table.begin()->second;
  for (const auto& [code, row] : table) {
    if (row.size() != ns.size())
      throw std::invalid_argument("compare_codes: " + std::string(to_string(code)) + " misses channel counts");
    for (const auto& [n, sir] : ns)
      if (!row.count(n))
        throw std::invalid_argument("compare_codes: " + std::string(to_string(code)) + " has no n = " +
                                    std::to_string(n));
  }

  for (const auto& [n, unused] : ns) {
    CodeRanking r;
    r.n_channels = n;
    r.ranking = cmp.codes;
    std::stable_sort(r.ranking.begin(), r.ranking.end(),
                     [&](LineCodeKind x, LineCodeKind y) { return table[x][n] > table[y][n]; });
    for (std::size_t i = 0; i < cmp.codes.size(); ++i)
      for (std::size_t j = i + 1; j < cmp.codes.size(); ++j) {
        const auto a = cmp.codes[i];
        const auto b = cmp.codes[j];
        r.gaps.push_back({a, b, table[a][n] - table[b][n]});
      }
    cmp.rows.push_back(std::move(r));
  }
  return cmp;
}

}  // namespace scm

#endif  // SCM_SIR_ANALYSIS_HPP
