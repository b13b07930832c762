#pragma once

// Cross-checks of the density oracles: normalisation and moments by quadrature,
// and goodness of fit against brute-force samples of the transformation chain.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chaoswpt/analytic.hpp"
#include "chaoswpt/channel.hpp"
#include "chaoswpt/chaos.hpp"
#include "chaoswpt/receiver.hpp"
#include "chaoswpt/rng.hpp"
#include "chaoswpt/waveform.hpp"

namespace chaoswpt {

inline constexpr double kMassTolerance = 1e-6;
inline constexpr double kMomentRelTolerance = 1e-5;
inline constexpr double kKsTolerance = 0.005;

/// Brute-force draws of the random variable an oracle describes, built from the
/// simulation chain (invariant-law chip, equiprobable bit, Rayleigh |h|).
/// S_clt replaces the chip sum by its Gaussian model N(0, beta/2).
inline std::vector<double> sample_oracle(const PdfOracle& o, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  if (o.family == PdfFamily::S_clt) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(static_cast<double>(o.beta) / 2.0));
    for (double& v : out) {
      const double a = 1.0 + rng.sign_bit();
      const double h = sample_rayleigh(rng);
      v = h * a * gauss(rng.engine());
    }
    return out;
  }

  FreshOrbitChips chips(rng);
  double reference[1];
  double frame[2];
  double received[2];
  for (double& v : out) {
    const int bit = rng.sign_bit();
    chips.fill(reference);
    modulate_into(bit, reference, frame);
    apply_channel_into(frame, sample_rayleigh(rng), received);
    switch (o.family) {
      case PdfFamily::S_b1:
      case PdfFamily::Z_b1:
      case PdfFamily::P_b1: {
        double y = 0.0;
        correlate_into(received, CorrelatorConfig{2}, std::span(&y, 1));
        v = o.family == PdfFamily::S_b1 ? y : o.family == PdfFamily::Z_b1 ? y * y : y * y * y * y;
        break;
      }
      case PdfFamily::Delta_b1:
        v = received[0] * received[0] + received[1] * received[1];
        break;
      case PdfFamily::Theta_b1:
        v = std::pow(received[0], 4) + std::pow(received[1], 4);
        break;
      case PdfFamily::S_clt:
        break;
    }
  }
  return out;
}

struct MomentTarget {
  int order;
  double value;
};

/// Moments each law must reproduce, as implied by the closed-form results.
inline std::vector<MomentTarget> moment_targets(const PdfOracle& o) {
  const double b = static_cast<double>(o.beta);
  switch (o.family) {
    case PdfFamily::S_b1:
      return {{2, 1.0}, {4, 6.0}};
    case PdfFamily::Z_b1:
      return {{1, 1.0}};
    case PdfFamily::P_b1:
      return {{1, 6.0}};
    case PdfFamily::S_clt:
      return {{2, b}, {4, 12.0 * b * b}};
    case PdfFamily::Delta_b1:
      return {{1, 1.0}};
    case PdfFamily::Theta_b1:
      return {{1, 1.5}};
  }
  return {};
}

struct VerifyCheck {
  std::string oracle;
  std::string check;  // "mass", "atom", "moment<k>", "ks"
  double value = 0.0;
  double target = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::size_t samples = 1000000;
  std::uint64_t seed = 42;
  std::vector<std::size_t> clt_betas{4, 25};
};

inline std::vector<PdfOracle> default_oracles(const std::vector<std::size_t>& clt_betas) {
  std::vector<PdfOracle> v{PdfOracle::make(PdfFamily::S_b1), PdfOracle::make(PdfFamily::Z_b1),
                           PdfOracle::make(PdfFamily::P_b1)};
  for (std::size_t b : clt_betas) v.push_back(PdfOracle::make(PdfFamily::S_clt, b));
  v.push_back(PdfOracle::make(PdfFamily::Delta_b1));
  v.push_back(PdfOracle::make(PdfFamily::Theta_b1));
  return v;
}

inline std::vector<VerifyCheck> verify_oracle(const PdfOracle& o, const VerifyOptions& opt) {
  std::vector<VerifyCheck> checks;
  const std::string name = o.name();

  const double mass = oracle_continuous_mass(o);
  const double mass_target = 1.0 - o.atom_at_zero();
  checks.push_back({name, "mass", mass, mass_target, std::abs(mass - mass_target), kMassTolerance,
                    std::abs(mass - mass_target) < kMassTolerance});
  checks.push_back({name, "atom", o.atom_at_zero(), o.atom_at_zero(), 0.0, 0.0, true});

  for (const MomentTarget& t : moment_targets(o)) {
    const double m = oracle_moment(o, t.order);
    const double rel = std::abs(m - t.value) / std::abs(t.value);
    checks.push_back({name, "moment" + std::to_string(t.order), m, t.value, rel, kMomentRelTolerance,
                      rel < kMomentRelTolerance});
  }

  Rng rng(stable_hash({opt.seed, static_cast<std::uint64_t>(o.family), static_cast<std::uint64_t>(o.beta)}));
  const double ks = ks_statistic(o, sample_oracle(o, opt.samples, rng));
  checks.push_back({name, "ks", ks, 0.0, ks, kKsTolerance, ks < kKsTolerance});
  return checks;
}

inline std::vector<VerifyCheck> verify_distributions(const VerifyOptions& opt = {}) {
  std::vector<VerifyCheck> all;
  for (const PdfOracle& o : default_oracles(opt.clt_betas)) {
    auto c = verify_oracle(o, opt);
    all.insert(all.end(), c.begin(), c.end());
  }
  return all;
}

}  // namespace chaoswpt
