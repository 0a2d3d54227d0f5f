#ifndef SCM_CSV_HPP
#define SCM_CSV_HPP

// CSV emission for PSDs, sweeps, code comparisons and calibration runs, plus
// a reader for sweep CSVs. Numbers use the shortest round-trip decimal form
// and files are written through a temporary that is renamed into place.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "scm/calibration.hpp"
#include "scm/config.hpp"
#include "scm/sir_analysis.hpp"
#include "scm/spectral.hpp"

namespace scm {

inline constexpr std::string_view kPsdCsvHeader = "frequency_hz,power";
inline constexpr std::string_view kSweepCsvHeader =
    "code,n_channels,channel_index,signal_power,cross_power,sir_db";

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

inline std::string psd_csv(const std::string& echo, const PsdEstimate& psd) {
  std::string out = echo;
  out += kPsdCsvHeader;
  out += '\n';
  for (std::size_t k = 0; k < psd.size(); ++k) {
    out += format_number(psd.bin_freqs[k]);
    out += ',';
    out += format_number(psd.power[k]);
    out += '\n';
  }
  return out;
}

inline std::string sweep_csv(const std::string& echo, const SirSweepResult& result) {
  std::string out = echo;
  out += kSweepCsvHeader;
  out += '\n';
  for (const auto& p : result.points) {
    out += to_string(p.code);
    out += ',' + std::to_string(p.n_channels) + ',' + std::to_string(p.channel_index) + ',';
    out += format_number(p.signal_band_power) + ',' + format_number(p.cross_band_power) + ',';
    out += format_number(p.sir_db);
    out += '\n';
  }
  return out;
}

inline std::string comparison_csv(const std::string& echo, const CodeComparison& cmp) {
  std::string out = echo;
  out += "n_channels,ranking";
  if (!cmp.rows.empty())
    for (const auto& g : cmp.rows.front().gaps)
      out += "," + std::string(to_string(g.a)) + "_minus_" + std::string(to_string(g.b)) + "_db";
  out += '\n';
  for (const auto& r : cmp.rows) {
    out += std::to_string(r.n_channels) + ',';
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      if (i) out += '>';
      out += to_string(r.ranking[i]);
    }
    for (const auto& g : r.gaps) out += ',' + format_number(g.db);
    out += '\n';
  }
  return out;
}

inline std::string calibration_csv(const std::string& echo, const CalibrationReport& rep) {
  std::string out = echo;
  out += "bit_rate,mod_index";
  for (const auto& t : rep.targets)
    out += "," + std::string(to_string(t.code)) + "_n" + std::to_string(t.n_channels) + "_sir_db";
  out += ",rms_error_db,best\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    out += format_number(r.bit_rate) + ',' + format_number(r.mod_index);
    for (double s : r.sir_db) out += ',' + format_number(s);
    out += ',' + format_number(r.rms_error_db) + ',' + (i == rep.best ? "1" : "0") + '\n';
  }
  return out;
}

/// Reads a sweep CSV written by sweep_csv. The config echo at the top, when
/// present, restores the configuration so reporting rows can be told apart
/// from worst-channel rows.
inline SirSweepResult read_sweep_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read sweep CSV '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();

  SimulationConfig cfg;
  if (text.rfind(kConfigEchoMarker, 0) == 0) {
    for (const auto& [key, value] : parse_config_text(text)) detail::find_key(key)->set(cfg, value);
  }
  SirSweepResult result;
  result.config = cfg.sweep_config();

  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  // The first row of a (code, n) group whose channel is the report channel is
  // the reporting row; every other row is the worst-channel row.
  std::map<std::pair<LineCodeKind, std::size_t>, bool> have_reporting;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (detail::trim(line) != kSweepCsvHeader) throw IoError(path + ": not a sweep CSV");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(detail::trim(cell));
    if (cells.size() != 6) throw IoError(path + ":" + std::to_string(line_no) + ": expected 6 columns");
    try {
      SirPoint p;
      p.code = parse_line_code(cells[0]);
      p.n_channels = std::stoul(cells[1]);
      p.channel_index = std::stoul(cells[2]);
      p.signal_band_power = std::stod(cells[3]);
      p.cross_band_power = std::stod(cells[4]);
      p.sir_db = std::stod(cells[5]);
      auto& seen = have_reporting[{p.code, p.n_channels}];
      if (!seen && p.channel_index == cfg.report_channel) {
        p.role = PointRole::Reporting;
        seen = true;
      } else {
        p.role = PointRole::Worst;
      }
      result.points.push_back(p);
    } catch (const std::exception& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw IoError(path + ": missing sweep CSV header");
  std::stable_sort(result.points.begin(), result.points.end(), point_less);
  return result;
}

}  // namespace scm

#endif  // SCM_CSV_HPP
