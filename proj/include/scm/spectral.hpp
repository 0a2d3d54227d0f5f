#ifndef SCM_SPECTRAL_HPP
#define SCM_SPECTRAL_HPP

// One-sided averaged periodograms and band-power integration.
//
// Normalization: with a rectangular window and a single segment the bin
// powers sum to the mean square of the input (Parseval). Windowed estimates
// are scaled by the window energy so broadband power is preserved on average.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scm {

enum class Window { Rectangular, Hann };

inline std::string_view to_string(Window w) {
  return w == Window::Hann ? "hann" : "rectangular";
}

inline Window parse_window(std::string_view name) {
  if (name == "rectangular" || name == "rect" || name == "none") return Window::Rectangular;
  if (name == "hann" || name == "hanning") return Window::Hann;
  throw std::invalid_argument("unknown window '" + std::string(name) + "'");
}

struct SpectralConfig {
  std::size_t fft_size = 131072;
  Window window = Window::Rectangular;
  std::size_t n_avg = 8;
};

struct PsdEstimate {
  std::vector<double> bin_freqs;  // Hz, k * sample_rate / fft_size for k = 0..fft_size/2
  std::vector<double> power;      // one-sided, amplitude^2 per bin
  double bin_width = 0.0;         // Hz
  double sample_rate = 0.0;       // Hz
  std::size_t fft_size = 0;
  Window window = Window::Rectangular;
  std::size_t n_avg = 1;

  std::size_t size() const noexcept { return power.size(); }
};

namespace detail {

// The FFTW planner is not reentrant; plan creation and destruction are
// serialized, execution with new-array calls is not.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!in_ || !out_) throw std::bad_alloc();
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("fftw plan creation failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::span<double> input() noexcept { return {in_.get(), n_}; }
  std::span<const fftw_complex> output() const noexcept { return {out_.get(), n_ / 2 + 1}; }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

inline std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::Hann) {
    // Periodic Hann.
    for (std::size_t k = 0; k < n; ++k)
      out[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                    static_cast<double>(n));
  }
  return out;
}

}  // namespace detail

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// Averages `n_avg` one-sided periodograms over consecutive, non-overlapping
/// segments of `fft_size` samples taken from the start of `samples`.
inline PsdEstimate estimate_psd(std::span<const double> samples, double sample_rate,
                                std::size_t fft_size, Window window = Window::Rectangular,
                                std::size_t n_avg = 1) {
  if (!is_power_of_two(fft_size) || fft_size < 2)
    throw std::invalid_argument("estimate_psd: fft_size must be a power of two >= 2");
  if (n_avg == 0) throw std::invalid_argument("estimate_psd: n_avg must be >= 1");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("estimate_psd: sample_rate must be > 0");
  if (samples.size() < fft_size * n_avg)
    throw std::invalid_argument("estimate_psd: need " + std::to_string(fft_size * n_avg) +
                                " samples, got " + std::to_string(samples.size()));

  const std::size_t n_bins = fft_size / 2 + 1;
  PsdEstimate psd;
  psd.sample_rate = sample_rate;
  psd.fft_size = fft_size;
  psd.window = window;
  psd.n_avg = n_avg;
  psd.bin_width = sample_rate / static_cast<double>(fft_size);
  psd.bin_freqs.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) psd.bin_freqs[k] = static_cast<double>(k) * psd.bin_width;
  psd.power.assign(n_bins, 0.0);

  const auto win = detail::make_window(window, fft_size);
  double win_energy = 0.0;
  for (double w : win) win_energy += w * w;
  // |X_k|^2 / (N * sum w^2); equals |X_k|^2 / N^2 for the rectangular window.
  const double scale = 1.0 / (static_cast<double>(fft_size) * win_energy * static_cast<double>(n_avg));

  detail::RealFft fft(fft_size);
  for (std::size_t seg = 0; seg < n_avg; ++seg) {
    auto in = fft.input();
    const auto chunk = samples.subspan(seg * fft_size, fft_size);
    for (std::size_t k = 0; k < fft_size; ++k) in[k] = chunk[k] * win[k];
    fft.execute();
    const auto out = fft.output();
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
      const bool edge = k == 0 || k == n_bins - 1;
      psd.power[k] += (edge ? 1.0 : 2.0) * mag2 * scale;
    }
  }
  return psd;
}

inline PsdEstimate estimate_psd(std::span<const double> samples, double sample_rate,
                                const SpectralConfig& cfg) {
  return estimate_psd(samples, sample_rate, cfg.fft_size, cfg.window, cfg.n_avg);
}

/// Sum of all bins whose center lies in [center - bandwidth/2, center + bandwidth/2).
inline double band_power(const PsdEstimate& psd, double center, double bandwidth) {
  const double lo = center - bandwidth / 2.0;
  const double hi = center + bandwidth / 2.0;
  if (!(bandwidth > 0.0)) throw std::invalid_argument("band_power: bandwidth must be > 0");
  if (!(lo > 0.0)) throw std::invalid_argument("band_power: band must not reach DC");
  if (hi > psd.sample_rate / 2.0)
    throw std::invalid_argument("band_power: band exceeds the Nyquist frequency");

  // Bin k has center k * bin_width; integer bounds avoid edge rounding drift.
  auto first = static_cast<std::size_t>(std::ceil(lo / psd.bin_width - 1e-9));
  auto last = static_cast<std::size_t>(std::ceil(hi / psd.bin_width - 1e-9));  // exclusive
  first = std::max<std::size_t>(first, 1);
  last = std::min(last, psd.power.size());
  double sum = 0.0;
  for (std::size_t k = first; k < last; ++k) sum += psd.power[k];
  return sum;
}

inline double total_power(const PsdEstimate& psd) noexcept {
  double sum = 0.0;
  for (double p : psd.power) sum += p;
  return sum;
}

inline double mean_square(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum / static_cast<double>(x.size());
}

}  // namespace scm

#endif  // SCM_SPECTRAL_HPP
