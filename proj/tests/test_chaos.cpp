#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "chaoswpt/chaos.hpp"

using namespace chaoswpt;
using Catch::Approx;

namespace {

// Composite midpoint rule over [a, b]; never evaluates the endpoints, where the
// arcsine density is singular. Kept apart from the library's quadrature.
template <typename F>
double midpoint(F f, double a, double b, int n = 400000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

struct Stats {
  double mean = 0, m2 = 0, m4 = 0, lag1 = 0;
};

Stats stats(std::span<const double> x) {
  Stats s;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    s.mean += x[k] / n;
    s.m2 += x[k] * x[k] / n;
    s.m4 += std::pow(x[k], 4) / n;
    if (k + 1 < x.size()) s.lag1 += x[k] * x[k + 1] / (n - 1);
  }
  return s;
}

}  // namespace

TEST_CASE("chebyshev_step evaluates T_degree", "[chaos]") {
  CHECK(chebyshev_step(0.5, 3) == Approx(-1.0).margin(1e-12));
  CHECK(chebyshev_step(1.0, 2) == Approx(1.0).margin(1e-15));
  // polynomial form of T_2 as the oracle
  CHECK(chebyshev_step(0.3, 2) == Approx(2 * 0.3 * 0.3 - 1).margin(1e-14));
  CHECK(chebyshev_step(0.3, 2) == Approx(-0.82).margin(1e-14));
  // T_3(x) = 4x^3 - 3x
  CHECK(chebyshev_step(-0.7, 3) == Approx(4 * std::pow(-0.7, 3) - 3 * -0.7).margin(1e-13));
}

TEST_CASE("chebyshev_step domain handling", "[chaos]") {
  CHECK(chebyshev_step(1.0 + 5e-13, 2) == Approx(1.0));
  CHECK(chebyshev_step(-1.0 - 5e-13, 2) == Approx(1.0));
  CHECK_THROWS_AS(chebyshev_step(1.0 + 1e-9, 2), std::domain_error);
  CHECK_THROWS_AS(chebyshev_step(-2.0, 2), std::domain_error);
  CHECK_THROWS_AS(chebyshev_step(0.1, 1), std::invalid_argument);
}

TEST_CASE("fixed points of the map", "[chaos]") {
  for (int d : {2, 3, 4, 5, 7}) {
    for (double p : chebyshev_fixed_points(d)) {
      CHECK(chebyshev_step(p, d) == Approx(p).margin(1e-12));
    }
  }
  const auto fp2 = chebyshev_fixed_points(2);
  REQUIRE(fp2.size() == 2);
  CHECK(fp2[0] == Approx(-0.5));
  CHECK(fp2[1] == Approx(1.0));
}

TEST_CASE("generate_sequence small orbit", "[chaos]") {
  const auto seq = generate_sequence(0.3, 3, 2);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == 0.3);
  CHECK(seq[1] == Approx(-0.82).margin(1e-14));
  CHECK(seq[2] == Approx(2 * 0.82 * 0.82 - 1).margin(1e-13));
  CHECK(seq[2] == Approx(0.3448).margin(1e-13));
  CHECK(seq.map_degree() == 2);
  CHECK(seq.seed_state() == 0.3);
}

TEST_CASE("generate_sequence rejects bad input", "[chaos]") {
  CHECK_THROWS_AS(generate_sequence(0.3, 0, 2), std::invalid_argument);
  for (double x0 : {-1.0, 0.0, 1.0, -0.5, -0.5 + 1e-10, 1.0 - 1e-10, 1.5}) {
    CHECK_THROWS_WITH(generate_sequence(x0, 10, 2), Catch::Matchers::ContainsSubstring("fixed point"));
  }
  // T_3 has fixed points at +-1 and 0 only
  CHECK_NOTHROW(generate_sequence(-0.5, 4, 3));
}

TEST_CASE("generated sequences stay in range and are deterministic", "[chaos]") {
  const auto a = generate_sequence(0.123456789, 1000000, 2);
  const auto b = generate_sequence(0.123456789, 1000000, 2);
  bool in_range = true;
  for (double x : a.samples()) in_range = in_range && std::abs(x) <= 1.0;
  CHECK(in_range);
  CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
}

TEST_CASE("long orbit matches the invariant-law moments", "[chaos][statistical]") {
  for (int degree : {2, 3}) {
    const auto seq = generate_sequence(0.3, 1000000, degree);
    const Stats s = stats(seq.samples());
    INFO("degree " << degree);
    CHECK(std::abs(s.mean) < 0.005);
    CHECK(std::abs(s.m2 - 0.5) < 0.005);
    CHECK(std::abs(s.m4 - 0.375) < 0.005);
    CHECK(std::abs(s.lag1) < 0.01);
  }
}

TEST_CASE("invariant density", "[chaos]") {
  CHECK(invariant_pdf(0.0) == Approx(1.0 / std::numbers::pi));
  CHECK(invariant_pdf(0.0) == Approx(0.31831).margin(1e-5));
  CHECK(invariant_pdf(1.5) == 0.0);
  CHECK(invariant_pdf(1.0) == 0.0);
  CHECK(invariant_pdf(-1.0) == 0.0);
  // x = sin(theta) removes the endpoint singularities
  const double mass = midpoint([](double t) { return invariant_pdf(std::sin(t)) * std::cos(t); },
                              -std::numbers::pi / 2, std::numbers::pi / 2);
  CHECK(mass == Approx(1.0).margin(1e-9));
}

TEST_CASE("theoretical moments", "[chaos]") {
  auto moment = [](int k) {
    return midpoint([k](double t) { return std::pow(std::sin(t), k) * invariant_pdf(std::sin(t)) * std::cos(t); },
                   -std::numbers::pi / 2, std::numbers::pi / 2);
  };
  CHECK(theoretical_moment(2) == 0.5);
  CHECK(theoretical_moment(4) == 0.375);
  CHECK(moment(2) == Approx(theoretical_moment(2)).margin(1e-9));
  CHECK(moment(4) == Approx(theoretical_moment(4)).margin(1e-9));
  CHECK_THROWS_AS(theoretical_moment(3), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_moment(6), std::invalid_argument);
}

TEST_CASE("fresh-orbit chips: per-frame statistics", "[chaos][statistical]") {
  Rng rng(7);
  FreshOrbitChips chips(rng);
  std::vector<double> frame(10);
  std::vector<double> all;
  all.reserve(1000000);
  for (int f = 0; f < 100000; ++f) {
    chips.fill(frame);
    for (std::size_t k = 1; k < frame.size(); ++k) {
      REQUIRE(frame[k] == Approx(2 * frame[k - 1] * frame[k - 1] - 1).margin(1e-9));
    }
    all.insert(all.end(), frame.begin(), frame.end());
  }
  const Stats s = stats(all);
  CHECK(std::abs(s.mean) < 0.005);
  CHECK(std::abs(s.m2 - 0.5) < 0.005);
  CHECK(std::abs(s.m4 - 0.375) < 0.005);
}

TEST_CASE("initial conditions follow the arcsine law", "[chaos][statistical]") {
  Rng rng(99);
  const int n = 200000;
  // P(X <= 0.5) = 1 - acos(0.5)/pi = 2/3
  int below = 0;
  for (int i = 0; i < n; ++i) below += draw_initial_condition(rng) <= 0.5;
  const double p = static_cast<double>(below) / n;
  CHECK(std::abs(p - 2.0 / 3.0) < 4 * std::sqrt(2.0 / 9.0 / n));
}

TEST_CASE("sequence chip source consumes contiguously", "[chaos]") {
  const auto seq = generate_sequence(0.3, 4, 2);
  SequenceChips src(seq);
  std::vector<double> a(2), b(2), c(1);
  src.fill(a);
  src.fill(b);
  CHECK(a[0] == seq[0]);
  CHECK(b[1] == seq[3]);
  CHECK_THROWS_AS(src.fill(c), std::out_of_range);
}
