#ifndef SCM_OPTICAL_CHAIN_HPP
#define SCM_OPTICAL_CHAIN_HPP

// Scalar-field model of one optical channel carrying n RF subcarriers.
//
// Each subcarrier intensity-modulates its own field, e_i = sqrt(s_i) with
// s_i = 1 + mu * m_i(t) * cos(2 pi f_i t). The fields add, pass through a
// lossy fiber with an identity impulse response, and a square-law detector
// produces i(t) = R * e(t)^2. The detector current splits exactly into
//   signal part  sum_i e_i^2
//   cross part   2 sum_{i<l} e_i e_l   (optical beat interference)
// Receiver noise is not modeled.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scm/linecode.hpp"

namespace scm {

struct ChannelPlan {
  std::size_t n_channels = 1;
  double base_freq = 1.0e6;     // f_1, Hz
  double spacing = 200.0e3;     // Hz
  double bandwidth = 200.0e3;   // B, Hz
  double mod_index = 1.0;       // mu
  double bit_rate = 100.0e3;    // 1 / tau, Hz
  double sample_rate = 16.0e6;  // Hz

  /// Subcarrier frequency of 1-based channel `i`.
  double carrier_freq(std::size_t i) const noexcept {
    return base_freq + static_cast<double>(i - 1) * spacing;
  }
  double highest_carrier() const noexcept { return carrier_freq(n_channels); }

  std::size_t samples_per_bit() const noexcept {
    return static_cast<std::size_t>(std::llround(sample_rate / bit_rate));
  }

  /// Whole bits needed to cover at least `min_samples` samples.
  std::size_t bits_for(std::size_t min_samples) const noexcept {
    const std::size_t spb = samples_per_bit();
    return (min_samples + spb - 1) / spb;
  }

  void validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("channel plan: " + what); };
    if (n_channels < 1) bad("n_channels must be >= 1");
    if (!(spacing > 0.0)) bad("spacing must be > 0");
    if (!(bandwidth > 0.0)) bad("bandwidth must be > 0");
    if (!(bit_rate > 0.0)) bad("bit_rate must be > 0");
    if (!(mod_index > 0.0 && mod_index <= 1.0)) bad("mod_index must be in (0, 1]");
    if (!(base_freq - bandwidth / 2.0 > 0.0)) bad("lowest band touches DC (base_freq - bandwidth/2 <= 0)");
    if (!(sample_rate > 2.0 * (highest_carrier() + 2.0 * bit_rate)))
      bad("sample_rate " + std::to_string(sample_rate) + " Hz violates Nyquist for f_n = " +
          std::to_string(highest_carrier()) + " Hz plus two bit rates of guard");
    const double spb = sample_rate / bit_rate;
    if (std::abs(spb - std::round(spb)) > 1e-9 * spb) bad("sample_rate / bit_rate must be an integer");
    if (std::llround(spb) % 2 != 0) bad("samples per bit must be even");
  }
};

struct IntensitySignal {
  std::vector<double> samples;  // normalized optical intensity, >= 0
  double carrier_freq = 0.0;
};

struct FieldSet {
  std::vector<std::vector<double>> per_channel;  // e_i(t)
  std::vector<double> composite;                 // e(t) = sum_i e_i(t)
  ChannelPlan plan;
  LineCodeKind code = LineCodeKind::NRZ;

  std::size_t n_samples() const noexcept { return composite.size(); }
};

struct FiberParams {
  double attenuation = 0.0;  // alpha, 1/km
  double length = 0.0;       // L, km

  void validate() const {
    if (!(attenuation >= 0.0)) throw std::invalid_argument("fiber: attenuation must be >= 0");
    if (!(length >= 0.0)) throw std::invalid_argument("fiber: length must be >= 0");
  }
  double field_gain() const noexcept { return std::exp(-attenuation * length); }
};

struct DetectorParams {
  double responsivity = 1.0;  // A/W

  void validate() const {
    if (!(responsivity > 0.0)) throw std::invalid_argument("detector: responsivity must be > 0");
  }
};

struct PhotocurrentDecomposition {
  std::vector<double> total;        // i(t) = R e(t)^2
  std::vector<double> signal_part;  // sum_i e_i^2, before R
  std::vector<double> cross_part;   // 2 sum_{i<l} e_i e_l, before R
  double sample_rate = 0.0;
  double responsivity = 1.0;
  ChannelPlan plan;
  LineCodeKind code = LineCodeKind::NRZ;
};

/// Negative intensities down to this value are rounding residue and clamp to 0.
inline constexpr double kIntensityUnderflowTolerance = 1e-8;

inline IntensitySignal modulate_subcarrier(const Waveform& m, double carrier_freq, double mod_index,
                                           double sample_rate) {
  if (!(mod_index > 0.0 && mod_index <= 1.0))
    throw std::invalid_argument("modulate_subcarrier: mod_index must be in (0, 1]");
  if (!(carrier_freq > 0.0 && carrier_freq < sample_rate / 2.0))
    throw std::invalid_argument("modulate_subcarrier: carrier above Nyquist");
  if (std::abs(m.sample_rate - sample_rate) > 1e-9 * sample_rate)
    throw std::invalid_argument("modulate_subcarrier: waveform sample rate mismatch");

  IntensitySignal s;
  s.carrier_freq = carrier_freq;
  s.samples.resize(m.samples.size());
  const double cycles_per_sample = carrier_freq / sample_rate;
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    // Reduce the phase to one cycle before scaling by 2 pi.
    double cyc = cycles_per_sample * static_cast<double>(k);
    cyc -= std::floor(cyc);
    s.samples[k] = 1.0 + mod_index * m.samples[k] * std::cos(2.0 * std::numbers::pi * cyc);
  }
  return s;
}

inline std::vector<double> intensity_to_field(std::span<const double> intensity) {
  std::vector<double> e(intensity.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    double v = intensity[k];
    if (v < 0.0) {
      if (v < -kIntensityUnderflowTolerance)
        throw std::domain_error("intensity_to_field: negative intensity " + std::to_string(v) +
                                " at sample " + std::to_string(k));
      v = 0.0;
    }
    e[k] = std::sqrt(v);
  }
  return e;
}

inline std::vector<double> intensity_to_field(const IntensitySignal& s) {
  return intensity_to_field(std::span<const double>(s.samples));
}

/// Builds the channel from explicit per-channel bit streams (one per subcarrier).
inline FieldSet assemble_channel(const ChannelPlan& plan, LineCodeKind code,
                                 std::span<const BitSequence> streams) {
  plan.validate();
  if (streams.size() != plan.n_channels)
    throw std::invalid_argument("assemble_channel: need one bit stream per channel");
  const std::size_t spb = plan.samples_per_bit();
  const std::size_t n_bits = streams.front().size();
  for (const auto& s : streams)
    if (s.size() != n_bits) throw std::invalid_argument("assemble_channel: bit streams differ in length");

  FieldSet fs;
  fs.plan = plan;
  fs.code = code;
  fs.composite.assign(n_bits * spb, 0.0);
  fs.per_channel.reserve(plan.n_channels);
  for (std::size_t i = 1; i <= plan.n_channels; ++i) {
    const auto m = encode(streams[i - 1], code, spb, plan.sample_rate);
    const auto s = modulate_subcarrier(m, plan.carrier_freq(i), plan.mod_index, plan.sample_rate);
    auto e = intensity_to_field(s);
    for (std::size_t k = 0; k < e.size(); ++k) fs.composite[k] += e[k];
    fs.per_channel.push_back(std::move(e));
  }
  return fs;
}

/// Channel i (1-based) draws its bits with seed `seed + (i - 1)`.
inline FieldSet assemble_channel(const ChannelPlan& plan, LineCodeKind code, std::uint64_t seed,
                                 std::size_t n_samples) {
  plan.validate();
  const std::size_t spb = plan.samples_per_bit();
  if (n_samples == 0 || n_samples % spb != 0)
    throw std::invalid_argument("assemble_channel: n_samples must be a positive multiple of " +
                                std::to_string(spb) + " samples per bit");
  std::vector<BitSequence> streams;
  streams.reserve(plan.n_channels);
  for (std::size_t i = 0; i < plan.n_channels; ++i)
    streams.push_back(generate_bits(n_samples / spb, seed + i));
  return assemble_channel(plan, code, streams);
}

inline FieldSet apply_fiber(FieldSet fs, const FiberParams& fiber) {
  fiber.validate();
  const double g = fiber.field_gain();
  if (g == 1.0) return fs;
  for (auto& e : fs.per_channel)
    for (auto& v : e) v *= g;
  for (auto& v : fs.composite) v *= g;
  return fs;
}

inline PhotocurrentDecomposition photodetect(const FieldSet& fs, const DetectorParams& det) {
  det.validate();
  const std::size_t n = fs.n_samples();
  PhotocurrentDecomposition d;
  d.sample_rate = fs.plan.sample_rate;
  d.responsivity = det.responsivity;
  d.plan = fs.plan;
  d.code = fs.code;
  d.total.resize(n);
  d.signal_part.assign(n, 0.0);
  d.cross_part.resize(n);
  for (const auto& e : fs.per_channel)
    for (std::size_t k = 0; k < n; ++k) d.signal_part[k] += e[k] * e[k];
  // e^2 - sum e_i^2 equals the pairwise sum; with one channel it is exactly 0.
  for (std::size_t k = 0; k < n; ++k) {
    const double c2 = fs.composite[k] * fs.composite[k];
    d.cross_part[k] = c2 - d.signal_part[k];
    d.total[k] = det.responsivity * c2;
  }
  return d;
}

/// Direct O(n^2) evaluation of 2 sum_{i<l} e_i e_l.
inline std::vector<double> cross_part_pairwise(const FieldSet& fs) {
  const std::size_t n = fs.n_samples();
  std::vector<double> c(n, 0.0);
  const auto& e = fs.per_channel;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t l = i + 1; l < e.size(); ++l)
      for (std::size_t k = 0; k < n; ++k) c[k] += 2.0 * e[i][k] * e[l][k];
  return c;
}

}  // namespace scm

#endif  // SCM_OPTICAL_CHAIN_HPP
