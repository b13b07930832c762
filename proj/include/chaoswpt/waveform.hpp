#pragma once

// DCSK symbol assembly: a block of beta reference chips followed by the same
// block multiplied by the data bit.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaoswpt/chaos.hpp"
#include "chaoswpt/rng.hpp"

namespace chaoswpt {

struct DcskFrame {
  std::vector<double> samples;  // 2 * beta chips, unit power scale
  int bit = 1;
  std::size_t beta = 0;

  std::span<const double> reference() const { return std::span(samples).first(beta); }
  std::span<const double> data() const { return std::span(samples).subspan(beta); }
};

inline void check_bit(int bit) {
  if (bit != 1 && bit != -1) {
    throw std::invalid_argument("DCSK bit must be +1 or -1, got " + std::to_string(bit));
  }
}

/// Write one symbol into `out` (size 2*beta) from `reference` (size beta).
inline void modulate_into(int bit, std::span<const double> reference, std::span<double> out) {
  const std::size_t beta = reference.size();
  std::copy(reference.begin(), reference.end(), out.begin());
  const double d = static_cast<double>(bit);
  for (std::size_t i = 0; i < beta; ++i) out[beta + i] = d * reference[i];
}

template <ChipSource Chips>
std::vector<DcskFrame> modulate(std::span<const int> bits, std::size_t beta, Chips& chips) {
  if (beta == 0) throw std::invalid_argument("modulate: spreading factor beta must be >= 1");
  if (bits.empty()) throw std::invalid_argument("modulate: no bits to modulate");
  for (int b : bits) check_bit(b);

  std::vector<DcskFrame> frames;
  frames.reserve(bits.size());
  std::vector<double> reference(beta);
  for (int b : bits) {
    chips.fill(reference);
    DcskFrame frame{std::vector<double>(2 * beta), b, beta};
    modulate_into(b, reference, frame.samples);
    frames.push_back(std::move(frame));
  }
  return frames;
}

inline std::vector<int> random_bits(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("random_bits: n must be positive");
  std::vector<int> bits(n);
  for (int& b : bits) b = rng.sign_bit();
  return bits;
}

}  // namespace chaoswpt
