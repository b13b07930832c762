#pragma once

// Analog correlator (delay-and-sum over psi chips) and PAPR measurement at the
// harvester input.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chaoswpt/chaos.hpp"

namespace chaoswpt {

enum class PsiMode { bypass, full, window };

inline std::string_view to_string(PsiMode m) {
  switch (m) {
    case PsiMode::bypass:
      return "bypass";
    case PsiMode::full:
      return "full";
    case PsiMode::window:
      return "window";
  }
  return "?";
}

inline PsiMode parse_psi_mode(std::string_view s) {
  if (s == "bypass") return PsiMode::bypass;
  if (s == "full") return PsiMode::full;
  if (s == "window") return PsiMode::window;
  throw std::invalid_argument("unknown psi mode '" + std::string(s) + "' (expected bypass|full|window)");
}

struct CorrelatorConfig {
  std::size_t psi = 1;  // window length in chips; 1 = bypass, 2*beta = full symbol

  static CorrelatorConfig for_mode(PsiMode mode, std::size_t beta, std::size_t window_psi = 1) {
    switch (mode) {
      case PsiMode::bypass:
        return {1};
      case PsiMode::full:
        return {2 * beta};
      case PsiMode::window:
        return {window_psi};
    }
    return {1};
  }
};

/// Number of harvester-input samples produced per frame of `frame_len` chips.
inline std::size_t correlator_output_len(std::size_t frame_len, CorrelatorConfig cfg) {
  return frame_len - cfg.psi + 1;
}

inline void check_correlator(std::size_t frame_len, CorrelatorConfig cfg) {
  if (frame_len == 0) throw std::invalid_argument("correlate: empty input");
  if (cfg.psi == 0) throw std::invalid_argument("correlate: psi must be >= 1");
  if (cfg.psi > frame_len) {
    throw std::invalid_argument("correlate: psi = " + std::to_string(cfg.psi) +
                                " exceeds frame length " + std::to_string(frame_len));
  }
}

/// Sliding sums of psi consecutive received chips. psi = 1 passes the frame
/// through; psi = frame length yields the single per-symbol correlator output.
inline void correlate_into(std::span<const double> received, CorrelatorConfig cfg, std::span<double> out) {
  const std::size_t n = received.size();
  if (cfg.psi == 1) {
    std::copy(received.begin(), received.end(), out.begin());
    return;
  }
  if (cfg.psi == n) {
    out[0] = std::accumulate(received.begin(), received.end(), 0.0);
    return;
  }
  // Each window summed directly; the running-sum form drifts for long frames.
  for (std::size_t start = 0; start + cfg.psi <= n; ++start) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cfg.psi; ++k) acc += received[start + k];
    out[start] = acc;
  }
}

inline std::vector<double> correlate(std::span<const double> received, CorrelatorConfig cfg) {
  check_correlator(received.size(), cfg);
  std::vector<double> out(correlator_output_len(received.size(), cfg));
  correlate_into(received, cfg, out);
  return out;
}

/// max(y^2) / mean(y^2) over the whole stream.
inline double empirical_papr(std::span<const double> stream) {
  if (stream.empty()) throw std::invalid_argument("empirical_papr: empty stream");
  double peak = 0.0;
  double sum = 0.0;
  for (double y : stream) {
    const double p = y * y;
    peak = std::max(peak, p);
    sum += p;
  }
  if (sum == 0.0) throw std::invalid_argument("empirical_papr: stream has zero power");
  return peak / (sum / static_cast<double>(stream.size()));
}

enum class PaprMode { per_symbol, stream };

inline std::string_view to_string(PaprMode m) { return m == PaprMode::stream ? "stream" : "per_symbol"; }

inline PaprMode parse_papr_mode(std::string_view s) {
  if (s == "per_symbol") return PaprMode::per_symbol;
  if (s == "stream") return PaprMode::stream;
  throw std::invalid_argument("unknown papr mode '" + std::string(s) + "' (expected per_symbol|stream)");
}

/// Conditional mean harvester-input power per output sample for a unit-amplitude
/// channel (E over chips and bit, |h| held fixed). Only defined for bypass/full.
inline double conditional_unit_power(PsiMode mode, std::size_t beta) {
  const double ex2 = theoretical_moment(2);
  switch (mode) {
    case PsiMode::bypass:
      return ex2;
    case PsiMode::full:
      // E[(1+d)^2] * beta * E[x^2]
      return 2.0 * static_cast<double>(beta) * ex2;
    case PsiMode::window:
      break;
  }
  return 0.0;
}

/// Streaming PAPR accumulator.
///
/// `stream` mode is the raw max/mean over everything observed, fading included.
/// `per_symbol` mode conditions on each symbol's channel: outputs are divided by
/// the symbol's amplitude factor, and the peak normalised power is divided by
/// `reference_power` (the conditional mean power given the channel). When no
/// reference is supplied, the empirical mean of the normalised powers is used.
class PaprMeter {
 public:
  explicit PaprMeter(PaprMode mode, double reference_power = 0.0)
      : mode_(mode), reference_(reference_power) {}

  void add_symbol(std::span<const double> outputs, double amplitude) {
    if (mode_ == PaprMode::stream) {
      for (double y : outputs) push(y * y);
      return;
    }
    if (!(amplitude > 0.0)) return;  // conditioning on a zero channel is undefined
    const double inv = 1.0 / (amplitude * amplitude);
    for (double y : outputs) push(y * y * inv);
  }

  void merge(const PaprMeter& other) {
    peak_ = std::max(peak_, other.peak_);
    sum_ += other.sum_;
    count_ += other.count_;
  }

  bool empty() const noexcept { return count_ == 0; }

  double value() const {
    if (count_ == 0) throw std::logic_error("PaprMeter: no samples");
    const double denom = (mode_ == PaprMode::per_symbol && reference_ > 0.0)
                             ? reference_
                             : sum_ / static_cast<double>(count_);
    if (!(denom > 0.0)) throw std::invalid_argument("PaprMeter: zero mean power");
    return peak_ / denom;
  }

  PaprMode mode() const noexcept { return mode_; }

 private:
  void push(double p) {
    peak_ = std::max(peak_, p);
    sum_ += p;
    ++count_;
  }

  PaprMode mode_;
  double reference_;
  double peak_ = 0.0;
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace chaoswpt
