#ifndef SCM_PSD_FEATURES_HPP
#define SCM_PSD_FEATURES_HPP

// Compares a measured line-code periodogram against its reference landmarks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scm/linecode.hpp"
#include "scm/spectral.hpp"

namespace scm {

struct PsdFeatureCheck {
  bool passed = true;
  double peak_freq = 0.0;        // Hz, strongest non-DC bin
  double peak_power = 0.0;
  double dc_rel_db = 0.0;        // DC bin relative to the peak bin
  std::vector<double> null_rel_db;  // each expected null relative to the peak bin
  std::vector<std::string> failures;
};

inline double rel_db(double p, double ref) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p / ref);
}

/// `min_depth_db` is how far below the peak a null must sit.
inline PsdFeatureCheck check_psd_features(const PsdEstimate& psd, const PsdFeatureSet& ref,
                                          double min_depth_db = 20.0) {
  PsdFeatureCheck out;
  if (psd.power.size() < 3) throw std::invalid_argument("check_psd_features: PSD too short");

  const auto peak_it = std::max_element(psd.power.begin() + 1, psd.power.end());
  const auto peak_k = static_cast<std::size_t>(peak_it - psd.power.begin());
  const double global_peak = std::max(*peak_it, psd.power[0]);
  out.peak_freq = psd.bin_freqs[peak_k];
  out.peak_power = *peak_it;
  out.dc_rel_db = rel_db(psd.power[0], global_peak);

  auto fail = [&](std::string msg) {
    out.passed = false;
    out.failures.push_back(std::move(msg));
  };

  for (double f : ref.null_freqs) {
    const auto k = static_cast<std::size_t>(std::lround(f / psd.bin_width));
    if (k >= psd.power.size()) continue;
    const double db = rel_db(psd.power[k], global_peak);
    out.null_rel_db.push_back(db);
    if (db > -min_depth_db)
      fail("null at " + std::to_string(f) + " Hz only " + std::to_string(-db) + " dB deep");
  }
  if (ref.dc_null && out.dc_rel_db > -min_depth_db)
    fail("DC bin only " + std::to_string(-out.dc_rel_db) + " dB below peak");
  if (ref.dc_maximum) {
    // Mean density over blocks of 0.2 * bit_rate; the block at DC must be the largest.
    const auto block = std::max<std::size_t>(1, static_cast<std::size_t>(0.2 * ref.bit_rate / psd.bin_width));
    auto block_mean = [&](std::size_t start) {
      const std::size_t end = std::min(start + block, psd.power.size());
      double s = 0.0;
      for (std::size_t k = start; k < end; ++k) s += psd.power[k];
      return s / static_cast<double>(end - start);
    };
    const double dc_block = block_mean(0);
    for (std::size_t start = block; start + block <= psd.power.size(); start += block)
      if (block_mean(start) > dc_block) {
        fail("density maximum is not in the DC region");
        break;
      }
  }
  if (ref.peak && !ref.peak->contains(out.peak_freq))
    fail("peak at " + std::to_string(out.peak_freq) + " Hz outside expected range");
  if (ref.low_power_near_dc && psd.power[0] >= out.peak_power)
    fail("DC bin is not below the spectral peak");
  return out;
}

}  // namespace scm

#endif  // SCM_PSD_FEATURES_HPP
