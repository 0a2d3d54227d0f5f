#ifndef SCM_CALIBRATION_HPP
#define SCM_CALIBRATION_HPP

// Grid search over bit rate and modulation index for the setting whose
// reporting-channel SIRs come closest to a set of published reference values.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scm/sir_analysis.hpp"

namespace scm {

struct SirTarget {
  LineCodeKind code;
  std::size_t n_channels;
  double sir_db;
};

/// Published reference points: n = 2 and n = 10 for each code.
inline std::vector<SirTarget> published_sir_targets() {
  using enum LineCodeKind;
  return {{Miller, 2, -2.0},  {NRZ, 2, -9.0},  {Manchester, 2, -14.0},
          {Miller, 10, -24.0}, {NRZ, 10, -46.0}, {Manchester, 10, -49.0}};
}

struct GapTarget {
  LineCodeKind a;
  LineCodeKind b;
  std::size_t n_channels;
  double gap_db;       // expected SIR(a) - SIR(b)
  double tolerance_db;
};

inline std::vector<GapTarget> published_gap_targets() {
  using enum LineCodeKind;
  return {{Miller, NRZ, 2, 7.0, 4.0}, {NRZ, Manchester, 2, 5.0, 4.0}};
}

struct CalibrationRow {
  double bit_rate = 0.0;
  double mod_index = 0.0;
  std::vector<double> sir_db;  // aligned with CalibrationReport::targets
  double rms_error_db = 0.0;
};

struct GapCheck {
  GapTarget target;
  double measured_db = 0.0;
  bool passed = false;
};

struct CalibrationReport {
  std::vector<SirTarget> targets;
  std::vector<CalibrationRow> rows;
  std::size_t best = 0;
  std::vector<GapCheck> gaps;  // evaluated at rows[best]

  bool gaps_passed() const {
    for (const auto& g : gaps)
      if (!g.passed) return false;
    return true;
  }
};

inline CalibrationReport calibrate(const SweepConfig& base, const std::vector<double>& bit_rates,
                                   const std::vector<double>& mod_indices,
                                   std::vector<SirTarget> targets = published_sir_targets(),
                                   std::vector<GapTarget> gap_targets = published_gap_targets()) {
  if (bit_rates.empty() || mod_indices.empty() || targets.empty())
    throw std::invalid_argument("calibrate: empty grid or target list");

  CalibrationReport rep;
  rep.targets = std::move(targets);
  double best_err = std::numeric_limits<double>::infinity();
  for (double br : bit_rates) {
    for (double mu : mod_indices) {
      SweepConfig cfg = base;
      cfg.plan.bit_rate = br;
      cfg.plan.mod_index = mu;
      cfg.validate();
      CalibrationRow row{br, mu, {}, 0.0};
      double sq = 0.0;
      for (const auto& t : rep.targets) {
        const auto pts = simulate_all_channels(cfg, t.code, t.n_channels);
        const double sir = pts.at(cfg.report_channel - 1).sir_db;
        row.sir_db.push_back(sir);
        sq += (sir - t.sir_db) * (sir - t.sir_db);
      }
      row.rms_error_db = std::sqrt(sq / static_cast<double>(rep.targets.size()));
      if (row.rms_error_db < best_err) {
        best_err = row.rms_error_db;
        rep.best = rep.rows.size();
      }
      rep.rows.push_back(std::move(row));
    }
  }

  const auto& best = rep.rows[rep.best];
  auto lookup = [&](LineCodeKind c, std::size_t n) -> std::optional<double> {
    for (std::size_t i = 0; i < rep.targets.size(); ++i)
      if (rep.targets[i].code == c && rep.targets[i].n_channels == n) return best.sir_db[i];
    return std::nullopt;
  };
  for (const auto& g : gap_targets) {
    const auto a = lookup(g.a, g.n_channels);
    const auto b = lookup(g.b, g.n_channels);
    if (!a || !b) throw std::invalid_argument("calibrate: gap target not covered by SIR targets");
    const double measured = *a - *b;
    rep.gaps.push_back({g, measured, std::abs(measured - g.gap_db) <= g.tolerance_db});
  }
  return rep;
}

}  // namespace scm

#endif  // SCM_CALIBRATION_HPP
