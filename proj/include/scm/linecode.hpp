#ifndef SCM_LINECODE_HPP
#define SCM_LINECODE_HPP

// Pseudo-random bit sources and binary line coders (NRZ, Manchester, Miller).
//
// All waveforms are polar: every sample is -1 or +1. A waveform is sampled on
// an integer number of samples per bit, and that number is even so Manchester
// and Miller can place transitions at mid-bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scm {

enum class LineCodeKind { NRZ, Manchester, Miller };

inline constexpr LineCodeKind kAllLineCodes[] = {LineCodeKind::NRZ, LineCodeKind::Manchester,
                                                 LineCodeKind::Miller};

inline std::string_view to_string(LineCodeKind code) {
  switch (code) {
    case LineCodeKind::NRZ: return "nrz";
    case LineCodeKind::Manchester: return "manchester";
    case LineCodeKind::Miller: return "miller";
  }
  return "?";
}

/// Accepts the canonical lower-case names plus a few common aliases.
inline LineCodeKind parse_line_code(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "nrz") return LineCodeKind::NRZ;
  if (s == "manchester" || s == "pe") return LineCodeKind::Manchester;
  if (s == "miller" || s == "mc" || s == "dm") return LineCodeKind::Miller;
  throw std::invalid_argument("unknown line code '" + std::string(name) + "'");
}

struct BitSequence {
  std::vector<std::uint8_t> bits;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return bits.size(); }
};

struct Waveform {
  std::vector<double> samples;
  double sample_rate = 0.0;   // Hz
  double bit_duration = 0.0;  // seconds
  LineCodeKind code = LineCodeKind::NRZ;

  std::size_t samples_per_bit() const noexcept {
    return static_cast<std::size_t>(sample_rate * bit_duration + 0.5);
  }
};

/// Draws `count` bits from std::mt19937_64 seeded with `seed`, one bit per
/// draw taken from the most significant bit. mt19937_64 is fully specified by
/// the standard, so sequences are identical across platforms.
inline BitSequence generate_bits(std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("generate_bits: count must be >= 1");
  std::mt19937_64 rng(seed);
  BitSequence out;
  out.seed = seed;
  out.bits.resize(count);
  for (auto& b : out.bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return out;
}

namespace detail {

inline void check_bits(std::span<const std::uint8_t> bits) {
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("bit sequence contains a value other than 0 or 1");
}

// Miller (delay modulation) state: the current line level and whether the
// previous bit was a one. The bit before the first is treated as a one and
// the line starts at -1.
struct MillerState {
  double level = -1.0;
  bool prev_one = true;
};

}  // namespace detail

/// Half-bit levels of the encoded stream (two entries per bit).
inline std::vector<double> encode_half_bits(std::span<const std::uint8_t> bits,
                                            LineCodeKind code) {
  detail::check_bits(bits);
  std::vector<double> half;
  half.reserve(bits.size() * 2);
  switch (code) {
    case LineCodeKind::NRZ:
      for (auto b : bits) {
        const double v = b ? 1.0 : -1.0;
        half.push_back(v);
        half.push_back(v);
      }
      break;
    case LineCodeKind::Manchester:
      // First half carries the bit, second half its complement.
      for (auto b : bits) {
        const double v = b ? 1.0 : -1.0;
        half.push_back(v);
        half.push_back(-v);
      }
      break;
    case LineCodeKind::Miller: {
      detail::MillerState st;
      for (auto b : bits) {
        if (b) {
          half.push_back(st.level);
          st.level = -st.level;
          half.push_back(st.level);
        } else {
          if (!st.prev_one) st.level = -st.level;
          half.push_back(st.level);
          half.push_back(st.level);
        }
        st.prev_one = b != 0;
      }
      break;
    }
  }
  return half;
}

inline Waveform encode(const BitSequence& bits, LineCodeKind code, std::size_t samples_per_bit,
                       double sample_rate) {
  if (samples_per_bit == 0) throw std::invalid_argument("encode: samples_per_bit must be >= 1");
  if (code != LineCodeKind::NRZ && samples_per_bit % 2 != 0)
    throw std::invalid_argument("encode: " + std::string(to_string(code)) +
                                " needs an even samples_per_bit");
  if (samples_per_bit < 2 && code != LineCodeKind::NRZ)
    throw std::invalid_argument("encode: samples_per_bit must be >= 2");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("encode: sample_rate must be positive");

  Waveform w;
  w.code = code;
  w.sample_rate = sample_rate;
  w.bit_duration = static_cast<double>(samples_per_bit) / sample_rate;
  w.samples.reserve(bits.size() * samples_per_bit);

  if (samples_per_bit % 2 == 0) {
    const auto half = encode_half_bits(bits.bits, code);
    const std::size_t per_half = samples_per_bit / 2;
    for (double v : half) w.samples.insert(w.samples.end(), per_half, v);
  } else {
    detail::check_bits(bits.bits);
    for (auto b : bits.bits) w.samples.insert(w.samples.end(), samples_per_bit, b ? 1.0 : -1.0);
  }
  return w;
}

/// Convenience overload with a unit sample rate (one sample per second).
inline Waveform encode(const BitSequence& bits, LineCodeKind code, std::size_t samples_per_bit) {
  return encode(bits, code, samples_per_bit, static_cast<double>(samples_per_bit));
}

struct FrequencyRange {
  double low = 0.0;   // Hz, exclusive
  double high = 0.0;  // Hz, exclusive

  bool contains(double f) const noexcept { return f > low && f < high; }
};

/// Qualitative spectral landmarks of a line code at a given bit rate.
struct PsdFeatureSet {
  LineCodeKind code = LineCodeKind::NRZ;
  double bit_rate = 0.0;
  std::vector<double> null_freqs;          // expected spectral nulls, Hz
  bool dc_null = false;                    // no power at DC
  bool dc_maximum = false;                 // density is largest near DC
  std::optional<FrequencyRange> peak;      // where the main-lobe peak sits
  bool low_power_near_dc = false;
};

/// `max_harmonic` bounds the list of NRZ nulls (k * bit_rate, k = 1..max).
inline PsdFeatureSet reference_psd_features(LineCodeKind code, double bit_rate,
                                            int max_harmonic = 3) {
  if (!(bit_rate > 0.0)) throw std::invalid_argument("reference_psd_features: bit_rate must be > 0");
  PsdFeatureSet f;
  f.code = code;
  f.bit_rate = bit_rate;
  switch (code) {
    case LineCodeKind::NRZ:
      for (int k = 1; k <= max_harmonic; ++k) f.null_freqs.push_back(k * bit_rate);
      f.dc_maximum = true;
      break;
    case LineCodeKind::Manchester:
      f.dc_null = true;
      f.peak = FrequencyRange{0.6 * bit_rate, 0.9 * bit_rate};
      break;
    case LineCodeKind::Miller:
      f.peak = FrequencyRange{0.3 * bit_rate, 0.5 * bit_rate};
      f.low_power_near_dc = true;
      break;
  }
  return f;
}

}  // namespace scm

#endif  // SCM_LINECODE_HPP
