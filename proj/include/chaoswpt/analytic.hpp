#pragma once

// Closed-form harvested-DC and PAPR results, the crossover bound, and evaluable
// densities for the intermediate random variables of the derivations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chaoswpt/channel.hpp"
#include "chaoswpt/quadrature.hpp"
#include "chaoswpt/receiver.hpp"

namespace chaoswpt {

struct ClosedFormInputs {
  std::size_t beta = 1;
  double r = 1.0;
  double alpha = 4.0;
  double rho1 = 0.0;
  double rho2 = 0.0;

  void validate() const {
    if (beta < 1) throw std::invalid_argument("ClosedFormInputs: beta must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("ClosedFormInputs: r must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("ClosedFormInputs: alpha must be > 0");
    if (!(rho1 >= 0.0) || !(rho2 >= 0.0)) throw std::invalid_argument("ClosedFormInputs: rho must be >= 0");
  }
};

/// Peak-to-average power ratio at the harvester input: 2 without the correlator,
/// 4*beta with a full-symbol correlator.
inline double papr_analytic(PsiMode mode, std::size_t beta) {
  if (beta < 1) throw std::invalid_argument("papr_analytic: beta must be >= 1");
  switch (mode) {
    case PsiMode::bypass:
      return 2.0;
    case PsiMode::full:
      return 4.0 * static_cast<double>(beta);
    case PsiMode::window:
      break;
  }
  throw std::invalid_argument("papr_analytic: no closed form for a partial correlator window");
}

/// Harvested DC behind a full-symbol correlator. beta = 1 is exact; beta > 1 is
/// the Gaussian (CLT) approximation of the chip sum. The two branches do not
/// join continuously, so the switch is on beta == 1 exactly.
inline double z_with_correlator(const ClosedFormInputs& in) {
  in.validate();
  const double g = path_gain(in.r, in.alpha);
  const double b = static_cast<double>(in.beta);
  if (in.beta == 1) return g * in.rho1 + 6.0 * g * g * in.rho2;
  return g * in.rho1 * b + 12.0 * g * g * in.rho2 * b * b;
}

/// Harvested DC without a correlator, valid for every beta.
inline double z_without_correlator(const ClosedFormInputs& in) {
  in.validate();
  const double g = path_gain(in.r, in.alpha);
  const double b = static_cast<double>(in.beta);
  return g * in.rho1 * b + 1.5 * g * g * in.rho2 * b;
}

inline double z_analytic(PsiMode mode, const ClosedFormInputs& in) {
  switch (mode) {
    case PsiMode::bypass:
      return z_without_correlator(in);
    case PsiMode::full:
      return z_with_correlator(in);
    case PsiMode::window:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Spreading factor above which a correlator receiver at r_c out-harvests a
/// bypass receiver at r_nc (using the beta > 1 closed form).
inline double beta_crossover(double r_c, double r_nc, double alpha, double rho1, double rho2) {
  if (!(r_c > 0.0) || !(r_nc > 0.0) || !(alpha > 0.0) || !(rho1 > 0.0) || !(rho2 > 0.0)) {
    throw std::invalid_argument("beta_crossover: all arguments must be positive");
  }
  const double gc = std::pow(r_c, -alpha);
  const double gnc = std::pow(r_nc, -alpha);
  return (rho1 * (gnc - gc) + 1.5 * rho2 * gnc * gnc) / (12.0 * rho2 * gc * gc);
}

/// Smallest integer beta >= 1 from which z_C(beta, r_c) > z_NC(beta, r_nc) holds for
/// every larger beta. beta = 1 uses the exact branch, where the gap works out
/// to 6 rho2 r_c^-2alpha (1 - 2 bound), so it qualifies only when bound < 1/2.
inline std::size_t minimal_crossover_beta(double r_c, double r_nc, double alpha, double rho1, double rho2) {
  const double bound = beta_crossover(r_c, r_nc, alpha, rho1, rho2);
  if (bound < 0.5) return 1;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(bound)) + 1);
}

// ---------------------------------------------------------------------------
// Density oracles

enum class PdfFamily { S_b1, Z_b1, P_b1, S_clt, Delta_b1, Theta_b1 };

inline std::string_view to_string(PdfFamily f) {
  switch (f) {
    case PdfFamily::S_b1:
      return "S_b1";
    case PdfFamily::Z_b1:
      return "Z_b1";
    case PdfFamily::P_b1:
      return "P_b1";
    case PdfFamily::S_clt:
      return "S_clt";
    case PdfFamily::Delta_b1:
      return "Delta_b1";
    case PdfFamily::Theta_b1:
      return "Theta_b1";
  }
  return "?";
}

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One of the derived laws. S is the correlator output |h|(1+d)sum(x), Z = S^2,
/// P = S^4 (beta = 1 or the CLT model); Delta = |h|^2 sum(s^2) and
/// Theta = |h|^4 sum(s^4) for the bypass receiver at beta = 1.
///
/// The laws involving S carry a point mass of 1/2 at zero from the d = -1
/// symbols, whose two halves cancel in the correlator.
struct PdfOracle {
  PdfFamily family = PdfFamily::S_b1;
  std::size_t beta = 1;  // used by S_clt only

  static PdfOracle make(PdfFamily f, std::size_t beta = 1) {
    if (f == PdfFamily::S_clt && beta < 1) throw std::invalid_argument("PdfOracle: beta must be >= 1");
    return {f, f == PdfFamily::S_clt ? beta : 1};
  }

  bool two_sided() const { return family == PdfFamily::S_b1 || family == PdfFamily::S_clt; }

  double atom_at_zero() const {
    switch (family) {
      case PdfFamily::S_b1:
      case PdfFamily::Z_b1:
      case PdfFamily::P_b1:
      case PdfFamily::S_clt:
        return 0.5;
      case PdfFamily::Delta_b1:
      case PdfFamily::Theta_b1:
        return 0.0;
    }
    return 0.0;
  }

  /// Exponent m of the substitution x = t^m that removes the power-law
  /// singularity at the origin (1 for the two-sided laws).
  int substitution_power() const {
    switch (family) {
      case PdfFamily::Z_b1:
      case PdfFamily::Delta_b1:
        return 2;
      case PdfFamily::P_b1:
      case PdfFamily::Theta_b1:
        return 4;
      default:
        return 1;
    }
  }

  std::string support() const { return two_sided() ? "(-inf, inf)" : "(0, inf)"; }

  std::string name() const {
    std::string n(to_string(family));
    if (family == PdfFamily::S_clt) n += "(beta=" + std::to_string(beta) + ")";
    return n;
  }
};

namespace detail {

inline double density_unchecked(const PdfOracle& o, double x) {
  using std::numbers::pi;
  const double sqrt_pi = std::sqrt(pi);
  switch (o.family) {
    case PdfFamily::S_b1:
      return std::exp(-x * x / 4.0) / (4.0 * sqrt_pi);
    case PdfFamily::S_clt: {
      const double sb = std::sqrt(static_cast<double>(o.beta));
      return std::exp(-std::abs(x) / sb) / (4.0 * sb);
    }
    case PdfFamily::Z_b1:
      return std::exp(-x / 4.0) / (4.0 * std::sqrt(pi * x));
    case PdfFamily::P_b1:
      return std::exp(-std::sqrt(x) / 4.0) / (8.0 * sqrt_pi * std::pow(x, 0.75));
    case PdfFamily::Delta_b1:
      return std::exp(-x / 2.0) / std::sqrt(2.0 * pi * x);
    case PdfFamily::Theta_b1:
      return std::exp(-std::sqrt(x / 2.0)) / (std::pow(2.0, 1.25) * sqrt_pi * std::pow(x, 0.75));
  }
  return 0.0;
}

// Density of t where x = t^m, times x^order: f(t^m) m t^(m-1) t^(m*order).
inline double substituted(const PdfOracle& o, double t, int order) {
  const int m = o.substitution_power();
  const double x = std::pow(t, m);
  if (!(x > 0.0)) return 0.0;  // t so small that t^m underflowed; integrable limit, zero weight
  const double d = density_unchecked(o, x);
  if (d == 0.0) return 0.0;  // far tail: avoids 0 * inf
  return d * m * std::pow(t, m - 1) * std::pow(x, order);
}

}  // namespace detail

/// Continuous-part density. Zero outside the support; the singular laws reject
/// the origin itself.
inline double pdf_eval(const PdfOracle& o, double x) {
  if (std::isnan(x)) throw std::invalid_argument("pdf_eval: NaN point");
  if (o.two_sided()) return detail::density_unchecked(o, x);
  if (x < 0.0 || std::isinf(x)) return 0.0;
  if (x == 0.0) throw SingularityError("pdf_eval: " + o.name() + " is singular at 0");
  return detail::density_unchecked(o, x);
}

inline constexpr int kMaxOracleMomentOrder = 12;

namespace detail {

// Integral of x^order f(x) over the whole continuous support.
inline double integrate_support(const PdfOracle& o, int order) {
  if (o.two_sided()) {
    auto f = [&](double x) {
      const double d = density_unchecked(o, x);
      return d == 0.0 ? 0.0 : std::pow(x, order) * d;
    };
    return quad::lower_tail(f, 0.0) + quad::upper_tail(f, 0.0);
  }
  return quad::upper_tail([&](double t) { return substituted(o, t, order); }, 0.0);
}

}  // namespace detail

/// E[X^order] over the full mixed law; the atom at zero adds nothing.
inline double oracle_moment(const PdfOracle& o, int order) {
  if (order < 1 || order > kMaxOracleMomentOrder) {
    throw std::invalid_argument("oracle_moment: order " + std::to_string(order) +
                                " unsupported (negative orders diverge at the origin; max " +
                                std::to_string(kMaxOracleMomentOrder) + ")");
  }
  return detail::integrate_support(o, order);
}

/// Mass of the continuous part alone (1 minus the atom when correct).
inline double oracle_continuous_mass(const PdfOracle& o) { return detail::integrate_support(o, 0); }

/// Continuous mass on [a, b], b >= a, both inside the support closure.
inline double oracle_mass_between(const PdfOracle& o, double a, double b) {
  if (b <= a) return 0.0;
  if (o.two_sided()) {
    auto f = [&](double x) { return detail::density_unchecked(o, x); };
    if (a < 0.0 && b > 0.0) return quad::finite_auto(f, a, 0.0) + quad::finite_auto(f, 0.0, b);
    return quad::finite_auto(f, a, b);
  }
  const double inv_m = 1.0 / o.substitution_power();
  const double ta = std::pow(std::max(a, 0.0), inv_m);
  const double tb = std::pow(std::max(b, 0.0), inv_m);
  return quad::finite_auto([&](double t) { return detail::substituted(o, t, 0); }, ta, tb);
}

/// Continuous-part CDF, integral from the lower support edge to x. Points
/// right of the origin use total mass minus the upper tail so that a far x
/// never forces a finite rule across the whole bulk.
inline double oracle_continuous_cdf(const PdfOracle& o, double x) {
  if (o.two_sided()) {
    auto f = [&](double s) { return detail::density_unchecked(o, s); };
    if (x <= 0.0) return quad::lower_tail(f, x);
    return oracle_continuous_mass(o) - quad::upper_tail(f, x);
  }
  if (x <= 0.0) return 0.0;
  const double tx = std::pow(x, 1.0 / o.substitution_power());
  return oracle_continuous_mass(o) - quad::upper_tail([&](double t) { return detail::substituted(o, t, 0); }, tx);
}

/// CDF of the full mixed law.
inline double oracle_cdf(const PdfOracle& o, double x) {
  return oracle_continuous_cdf(o, x) + (x >= 0.0 ? o.atom_at_zero() : 0.0);
}

/// Two-sided Kolmogorov-Smirnov distance between `samples` and the mixed law.
/// The model CDF is built by integrating pdf_eval between consecutive order
/// statistics, so the check exercises the density itself.
inline double ks_statistic(const PdfOracle& o, std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  const double atom = o.atom_at_zero();

  double d = 0.0;
  double cont = oracle_continuous_cdf(o, samples.front());
  double prev = samples.front();
  std::size_t i = 0;
  while (i < samples.size()) {
    const double v = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == v) ++j;
    cont += oracle_mass_between(o, prev, v);
    prev = v;
    const double model_hi = cont + (v >= 0.0 ? atom : 0.0);
    const double model_lo = cont + (v > 0.0 ? atom : 0.0);
    d = std::max(d, std::abs(static_cast<double>(j) / n - model_hi));
    d = std::max(d, std::abs(static_cast<double>(i) / n - model_lo));
    i = j;
  }
  return d;
}

}  // namespace chaoswpt
