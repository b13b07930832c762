#pragma once

// Nonlinear rectenna model: DC output as a second- plus fourth-moment
// polynomial of the harvester input.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaoswpt {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

struct EhCircuit {
  double k2 = 0.0034;
  double k4 = 0.3829;
  double r_ant = 50.0;  // ohms
  double p_t = 1.0;     // watts

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("EhCircuit: ") + name + " must be positive and finite");
      }
    };
    positive(k2, "k2");
    positive(k4, "k4");
    positive(r_ant, "r_ant");
    positive(p_t, "p_t");
  }

  double second_order_gain() const { return k2 * r_ant; }
  double fourth_order_gain() const { return k4 * r_ant * r_ant; }
};

struct RhoParams {
  double rho1 = 0.0;  // k2 R_ant P_t
  double rho2 = 0.0;  // k4 R_ant^2 P_t^2
};

inline RhoParams rho_params(const EhCircuit& c) {
  return {c.k2 * c.r_ant * c.p_t, c.k4 * c.r_ant * c.r_ant * c.p_t * c.p_t};
}

struct DcEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_frames = 0;
  double mean_second = 0.0;  // per-frame mean of sum y^2
  double mean_fourth = 0.0;  // per-frame mean of sum y^4
};

/// Per-frame accumulator for the DC output.
///
/// Each frame contributes z_f = k2 R sum(y^2) + k4 R^2 sum(y^4) over its
/// harvester-input samples: one sample per frame behind a full correlator, 2*beta
/// behind a bypassed one. Frames are the i.i.d. unit, so the standard error is
/// the sample deviation of z_f over sqrt(n). Merging uses the pairwise update,
/// which is deterministic for a fixed merge order.
class DcAccumulator {
 public:
  DcAccumulator() = default;
  DcAccumulator(double second_gain, double fourth_gain) : g2_(second_gain), g4_(fourth_gain) {}
  explicit DcAccumulator(const EhCircuit& c) : DcAccumulator(c.second_order_gain(), c.fourth_order_gain()) {}

  void add_frame(std::span<const double> outputs) {
    double e2 = 0.0;
    double e4 = 0.0;
    for (double y : outputs) {
      const double p = y * y;
      e2 += p;
      e4 += p * p;
    }
    push(g2_ * e2 + g4_ * e4, e2, e4);
  }

  void merge(const DcAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double wa = static_cast<double>(n_) / n;
    const double wb = static_cast<double>(o.n_) / n;
    const double delta = o.mean_ - mean_;
    m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    mean_ = wa * mean_ + wb * o.mean_;
    e2_ = wa * e2_ + wb * o.e2_;
    e4_ = wa * e4_ + wb * o.e4_;
    n_ += o.n_;
  }

  std::size_t count() const noexcept { return n_; }

  DcEstimate estimate() const {
    if (n_ == 0) throw std::logic_error("DcAccumulator: no frames");
    DcEstimate e;
    e.mean = mean_;
    e.n_frames = n_;
    e.mean_second = e2_;
    e.mean_fourth = e4_;
    e.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    return e;
  }

 private:
  void push(double z, double e2, double e4) {
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = z - mean_;
    mean_ += delta / n;
    m2_ += delta * (z - mean_);
    e2_ += (e2 - e2_) / n;
    e4_ += (e4 - e4_) / n;
  }

  double g2_ = 0.0;
  double g4_ = 0.0;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double e2_ = 0.0;
  double e4_ = 0.0;
};

/// DC estimate from a flat harvester-input stream grouped into frames of
/// `samples_per_frame` samples. Samples must already include transmit power,
/// fading and path-loss scaling.
inline DcEstimate harvest_dc(std::span<const double> stream, std::size_t samples_per_frame,
                             const EhCircuit& circuit) {
  circuit.validate();
  if (stream.empty()) throw std::invalid_argument("harvest_dc: empty stream");
  if (samples_per_frame == 0 || stream.size() % samples_per_frame != 0) {
    throw std::invalid_argument("harvest_dc: stream length " + std::to_string(stream.size()) +
                                " is not a multiple of the frame size");
  }
  DcAccumulator acc(circuit);
  for (std::size_t off = 0; off < stream.size(); off += samples_per_frame) {
    acc.add_frame(stream.subspan(off, samples_per_frame));
  }
  return acc.estimate();
}

inline DcEstimate harvest_dc(const std::vector<std::vector<double>>& frames, const EhCircuit& circuit) {
  circuit.validate();
  if (frames.empty()) throw std::invalid_argument("harvest_dc: empty stream");
  DcAccumulator acc(circuit);
  for (const auto& f : frames) {
    if (f.empty()) throw std::invalid_argument("harvest_dc: empty frame");
    acc.add_frame(f);
  }
  return acc.estimate();
}

}  // namespace chaoswpt
