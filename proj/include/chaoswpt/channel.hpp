#pragma once

// Rayleigh block fading with distance path loss, applied in the amplitude domain.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "chaoswpt/rng.hpp"
#include "chaoswpt/waveform.hpp"

namespace chaoswpt {

struct ChannelDraw {
  double h_mag = 1.0;  // fading amplitude |h|
  double r = 1.0;      // metres
  double alpha = 4.0;  // path-loss exponent

  void validate() const {
    if (!(h_mag >= 0.0)) throw std::invalid_argument("ChannelDraw: h_mag must be >= 0");
    if (!(r > 0.0)) throw std::invalid_argument("ChannelDraw: distance r must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("ChannelDraw: alpha must be > 0");
  }
};

/// |h| with E[|h|^2] = 1, from a uniform u in (0, 1] by CDF inversion.
inline double rayleigh_from_uniform(double u) { return std::sqrt(-std::log(u)); }

inline double sample_rayleigh(Rng& rng) { return rayleigh_from_uniform(rng.uniform_open_closed()); }

/// Power-domain path gain r^-alpha.
inline double path_gain(double r, double alpha) {
  if (!(r > 0.0)) throw std::invalid_argument("path_gain: distance r must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("path_gain: alpha must be > 0");
  return std::pow(r, -alpha);
}

/// Per-sample amplitude factor sqrt(P_t) * |h| * sqrt(r^-alpha).
inline double channel_amplitude(const ChannelDraw& draw, double p_t) {
  if (!(p_t > 0.0)) throw std::invalid_argument("apply_channel: transmit power must be > 0");
  draw.validate();
  return std::sqrt(p_t * path_gain(draw.r, draw.alpha)) * draw.h_mag;
}

inline void apply_channel_into(std::span<const double> in, double amplitude, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = amplitude * in[k];
}

inline std::vector<double> apply_channel(const DcskFrame& frame, const ChannelDraw& draw, double p_t) {
  const double a = channel_amplitude(draw, p_t);
  std::vector<double> out(frame.samples.size());
  apply_channel_into(frame.samples, a, out);
  return out;
}

}  // namespace chaoswpt
