#pragma once

// Chebyshev chaotic map, its arcsine invariant law, and chip sources for the
// DCSK modulator.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaoswpt/rng.hpp"

namespace chaoswpt {

inline constexpr int kDefaultMapDegree = 2;
inline constexpr double kDomainTolerance = 1e-12;
inline constexpr double kFixedPointGuard = 1e-9;

namespace detail {

inline void check_degree(int degree) {
  if (degree < 2) {
    throw std::invalid_argument("Chebyshev map degree must be >= 2, got " + std::to_string(degree));
  }
}

// Caller guarantees |x| <= 1.
inline double step_unchecked(double x, int degree) noexcept {
  return std::cos(static_cast<double>(degree) * std::acos(x));
}

}  // namespace detail

/// One iteration of the degree-`degree` Chebyshev map, T(x) = cos(degree * arccos x).
/// Inputs within 1e-12 outside [-1, 1] are clamped; anything further out is a domain error.
inline double chebyshev_step(double x, int degree = kDefaultMapDegree) {
  detail::check_degree(degree);
  if (!(std::abs(x) <= 1.0 + kDomainTolerance)) {
    throw std::domain_error("chebyshev_step: |x| > 1 (x = " + std::to_string(x) + ")");
  }
  return detail::step_unchecked(std::clamp(x, -1.0, 1.0), degree);
}

/// Fixed points of T_degree inside [-1, 1], ascending.
inline std::vector<double> chebyshev_fixed_points(int degree) {
  detail::check_degree(degree);
  // cos(d*t) = cos(t) on [0, pi]  <=>  t = 2*pi*k/(d-1) or t = 2*pi*k/(d+1)
  std::vector<double> points;
  for (int denom : {degree - 1, degree + 1}) {
    for (int k = 0; 2 * k <= denom; ++k) {
      points.push_back(std::cos(2.0 * std::numbers::pi * k / denom));
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               points.end());
  return points;
}

/// True when x0 cannot seed a useful orbit: outside (-1, 1), zero (whose image is
/// +-1 or 0, both fixed), or within 1e-9 of a fixed point of the map.
inline bool is_degenerate_seed(double x0, std::span<const double> fixed_points) {
  if (!(std::abs(x0) < 1.0) || std::abs(x0) < kFixedPointGuard) return true;
  for (double p : fixed_points) {
    if (std::abs(x0 - p) < kFixedPointGuard) return true;
  }
  return false;
}

inline bool is_degenerate_seed(double x0, int degree) {
  return is_degenerate_seed(x0, chebyshev_fixed_points(degree));
}

class ChaoticSequence {
 public:
  ChaoticSequence(std::vector<double> samples, int map_degree, double seed_state)
      : samples_(std::move(samples)), map_degree_(map_degree), seed_state_(seed_state) {}

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  int map_degree() const noexcept { return map_degree_; }
  double seed_state() const noexcept { return seed_state_; }

 private:
  std::vector<double> samples_;
  int map_degree_;
  double seed_state_;
};

/// n samples of the orbit starting at x0 (x0 itself is the first sample).
inline ChaoticSequence generate_sequence(double x0, std::size_t n, int degree = kDefaultMapDegree) {
  detail::check_degree(degree);
  if (n == 0) throw std::invalid_argument("generate_sequence: n must be positive");
  if (is_degenerate_seed(x0, degree)) {
    throw std::invalid_argument("generate_sequence: x0 = " + std::to_string(x0) +
                                " is outside (-1,1) or at/near a fixed point of the Chebyshev map");
  }
  std::vector<double> out(n);
  out[0] = x0;
  for (std::size_t k = 1; k < n; ++k) out[k] = detail::step_unchecked(out[k - 1], degree);
  return ChaoticSequence(std::move(out), degree, x0);
}

/// Arcsine density 1/(pi sqrt(1-x^2)) on the open interval (-1, 1); 0 elsewhere.
inline double invariant_pdf(double x) noexcept {
  if (!(std::abs(x) < 1.0)) return 0.0;
  return 1.0 / (std::numbers::pi * std::sqrt(1.0 - x * x));
}

/// E[X^order] under the invariant law. Only orders 2 and 4 are exposed.
inline double theoretical_moment(int order) {
  switch (order) {
    case 2:
      return 0.5;
    case 4:
      return 0.375;
    default:
      throw std::invalid_argument("theoretical_moment: only orders 2 and 4 are supported, got " +
                                  std::to_string(order));
  }
}

/// Draw x0 from the invariant law by inversion (x0 = cos(pi U)), redrawing the
/// measure-zero degenerate cases.
inline double draw_initial_condition(Rng& rng, std::span<const double> fixed_points) {
  for (;;) {
    const double x0 = std::cos(std::numbers::pi * rng.uniform());
    if (!is_degenerate_seed(x0, fixed_points)) return x0;
  }
}

inline double draw_initial_condition(Rng& rng, int degree = kDefaultMapDegree) {
  return draw_initial_condition(rng, chebyshev_fixed_points(degree));
}

template <typename S>
concept ChipSource = requires(S& s, std::span<double> out) {
  { s.fill(out) };
};

/// Fresh orbit per fill: each call starts from a new invariant-law draw.
class FreshOrbitChips {
 public:
  explicit FreshOrbitChips(Rng& rng, int degree = kDefaultMapDegree)
      : rng_(&rng), degree_(degree), fixed_points_(chebyshev_fixed_points(degree)) {}

  void fill(std::span<double> out) {
    if (out.empty()) return;
    out[0] = draw_initial_condition(*rng_, fixed_points_);
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = detail::step_unchecked(out[k - 1], degree_);
  }

 private:
  Rng* rng_;
  int degree_;
  std::vector<double> fixed_points_;
};

/// Consumes an existing sequence contiguously.
class SequenceChips {
 public:
  explicit SequenceChips(const ChaoticSequence& seq) : seq_(&seq) {}

  void fill(std::span<double> out) {
    if (pos_ + out.size() > seq_->size()) {
      throw std::out_of_range("SequenceChips: chaotic sequence exhausted");
    }
    std::copy_n(seq_->samples().begin() + static_cast<std::ptrdiff_t>(pos_), out.size(), out.begin());
    pos_ += out.size();
  }

  std::size_t consumed() const noexcept { return pos_; }

 private:
  const ChaoticSequence* seq_;
  std::size_t pos_ = 0;
};

}  // namespace chaoswpt
