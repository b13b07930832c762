#pragma once

// End-to-end Monte-Carlo engine: chaos -> DCSK -> channel -> correlator ->
// harvester, compared against the closed forms.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "chaoswpt/analytic.hpp"
#include "chaoswpt/channel.hpp"
#include "chaoswpt/chaos.hpp"
#include "chaoswpt/harvester.hpp"
#include "chaoswpt/receiver.hpp"
#include "chaoswpt/rng.hpp"
#include "chaoswpt/waveform.hpp"

namespace chaoswpt {

inline constexpr std::size_t kMinReliableFrames = 100;
inline constexpr std::size_t kFramesPerBatch = 4096;

struct RunConfig {
  std::size_t beta = 1;
  double r = 20.0;
  double alpha = 4.0;
  PsiMode psi_mode = PsiMode::full;
  std::size_t psi = 1;  // window length, only read when psi_mode == window
  EhCircuit circuit{};
  std::size_t n_frames = 100000;
  std::uint64_t seed = 42;
  int map_degree = kDefaultMapDegree;
  unsigned threads = 0;  // 0 = hardware concurrency

  CorrelatorConfig correlator() const { return CorrelatorConfig::for_mode(psi_mode, beta, psi); }

  ClosedFormInputs closed_form_inputs() const {
    const RhoParams rho = rho_params(circuit);
    return {beta, r, alpha, rho.rho1, rho.rho2};
  }

  void validate() const {
    if (beta < 1) throw std::invalid_argument("RunConfig: beta must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("RunConfig: r must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("RunConfig: alpha must be > 0");
    if (n_frames == 0) throw std::invalid_argument("RunConfig: n_frames must be positive");
    if (map_degree < 2) throw std::invalid_argument("RunConfig: map_degree must be >= 2");
    circuit.validate();
    check_correlator(2 * beta, correlator());
  }
};

struct RunResult {
  DcEstimate estimate;
  double analytic = 0.0;        // NaN for a partial correlator window
  double papr_empirical = 0.0;  // per-symbol conditioned
  double papr_stream = 0.0;     // raw whole-stream max/mean
  std::vector<std::string> warnings;
};

namespace detail {

struct BatchResult {
  DcAccumulator dc;
  PaprMeter papr_symbol{PaprMode::per_symbol};
  PaprMeter papr_stream{PaprMode::stream};
};

inline BatchResult run_batch(const RunConfig& cfg, std::size_t batch, std::size_t frames) {
  Rng rng(stable_hash({cfg.seed, static_cast<std::uint64_t>(batch)}));
  FreshOrbitChips chips(rng, cfg.map_degree);

  const CorrelatorConfig corr = cfg.correlator();
  const std::size_t frame_len = 2 * cfg.beta;
  const std::size_t out_len = correlator_output_len(frame_len, corr);
  const double amp_scale = std::sqrt(cfg.circuit.p_t * path_gain(cfg.r, cfg.alpha));
  const double ref_power = conditional_unit_power(cfg.psi_mode, cfg.beta);

  BatchResult res{DcAccumulator(cfg.circuit), PaprMeter(PaprMode::per_symbol, ref_power),
                  PaprMeter(PaprMode::stream)};
  std::vector<double> reference(cfg.beta);
  std::vector<double> frame(frame_len);
  std::vector<double> received(frame_len);
  std::vector<double> output(out_len);

  for (std::size_t f = 0; f < frames; ++f) {
    const int bit = rng.sign_bit();
    chips.fill(reference);
    modulate_into(bit, reference, frame);
    const double amplitude = amp_scale * sample_rayleigh(rng);  // block fading: one draw per symbol
    apply_channel_into(frame, amplitude, received);
    correlate_into(received, corr, output);
    res.dc.add_frame(output);
    res.papr_symbol.add_symbol(output, amplitude);
    res.papr_stream.add_symbol(output, amplitude);
  }
  return res;
}

}  // namespace detail

/// One Monte-Carlo point. Frames are generated in fixed-size batches, each with
/// its own seed derived from (seed, batch index), and reduced in batch order, so
/// the result does not depend on the thread count.
inline RunResult run_once(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t n_batches = (cfg.n_frames + kFramesPerBatch - 1) / kFramesPerBatch;
  std::vector<detail::BatchResult> batches(n_batches);

  auto frames_in = [&](std::size_t b) {
    return std::min(kFramesPerBatch, cfg.n_frames - b * kFramesPerBatch);
  };

  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_batches));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_batches; ++b) batches[b] = detail::run_batch(cfg, b, frames_in(b));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = next++; b < n_batches; b = next++) {
            batches[b] = detail::run_batch(cfg, b, frames_in(b));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::BatchResult total = std::move(batches.front());
  for (std::size_t b = 1; b < n_batches; ++b) {
    total.dc.merge(batches[b].dc);
    total.papr_symbol.merge(batches[b].papr_symbol);
    total.papr_stream.merge(batches[b].papr_stream);
  }

  RunResult out;
  out.estimate = total.dc.estimate();
  out.analytic = z_analytic(cfg.psi_mode, cfg.closed_form_inputs());
  out.papr_empirical = total.papr_symbol.empty() ? 0.0 : total.papr_symbol.value();
  out.papr_stream = total.papr_stream.value();
  if (cfg.n_frames < kMinReliableFrames) {
    out.warnings.push_back("n_frames = " + std::to_string(cfg.n_frames) + " is below " +
                           std::to_string(kMinReliableFrames) + "; standard error is unreliable");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  std::size_t beta = 1;
  double r = 0.0;
  PsiMode mode = PsiMode::full;
  std::uint64_t seed = 0;
  DcEstimate estimate;
  double analytic = 0.0;
  double papr_analytic = 0.0;
  double papr_empirical = 0.0;

  double rel_dev() const { return std::abs(estimate.mean - analytic) / analytic; }
};

struct SweepFailure {
  std::size_t beta = 0;
  double r = 0.0;
  PsiMode mode = PsiMode::full;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<SweepFailure> failure;

  std::vector<SweepRow> series(double r, PsiMode mode) const {
    std::vector<SweepRow> out;
    for (const auto& row : rows) {
      if (row.r == r && row.mode == mode) out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) { return a.beta < b.beta; });
    return out;
  }

  const SweepRow* find(std::size_t beta, double r, PsiMode mode) const {
    for (const auto& row : rows) {
      if (row.beta == beta && row.r == r && row.mode == mode) return &row;
    }
    return nullptr;
  }
};

inline std::uint64_t row_seed(std::uint64_t base, std::size_t beta, double r, PsiMode mode) {
  return stable_hash({base, static_cast<std::uint64_t>(beta), bits_of(r), static_cast<std::uint64_t>(mode)});
}

/// Cartesian product betas x distances x modes. Each row's seed is a hash of its
/// coordinates, so a row reproduces regardless of which other rows are swept.
/// The first failing row stops the sweep; completed rows are kept.
inline SweepResult sweep_beta(const std::vector<std::size_t>& betas, const std::vector<double>& distances,
                              const std::vector<PsiMode>& modes, const RunConfig& base) {
  if (betas.empty() || distances.empty() || modes.empty()) {
    throw std::invalid_argument("sweep_beta: betas, distances and modes must be nonempty");
  }
  SweepResult result;
  for (double r : distances) {
    for (PsiMode mode : modes) {
      for (std::size_t beta : betas) {
        RunConfig cfg = base;
        cfg.beta = beta;
        cfg.r = r;
        cfg.psi_mode = mode;
        cfg.seed = row_seed(base.seed, beta, r, mode);
        try {
          const RunResult run = run_once(cfg);
          SweepRow row;
          row.beta = beta;
          row.r = r;
          row.mode = mode;
          row.seed = cfg.seed;
          row.estimate = run.estimate;
          row.analytic = run.analytic;
          row.papr_analytic = mode == PsiMode::window ? std::nan("") : papr_analytic(mode, beta);
          row.papr_empirical = run.papr_empirical;
          result.rows.push_back(row);
        } catch (const std::exception& e) {
          result.failure = SweepFailure{beta, r, mode, e.what()};
          return result;
        }
      }
    }
  }
  return result;
}

inline std::vector<std::size_t> default_beta_grid() {
  std::vector<std::size_t> grid{1, 2, 5};
  for (std::size_t b = 10; b <= 100; b += 10) grid.push_back(b);
  return grid;
}

// ---------------------------------------------------------------------------
// Scaling fits

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double se0 = 0.0, se1 = 0.0, se2 = 0.0;  // propagated from per-point standard errors
  std::size_t n_points = 0;
  std::size_t beta_max = 0;

  double operator()(double beta) const { return c0 + beta * (c1 + beta * c2); }
};

/// Weighted least squares of z against (1, beta, beta^2) with relative-error
/// weights 1/scale^2, where scale is the row's closed-form value (or |mean| when
/// there is none). The spread of a row grows with its level, so unweighted fits
/// let the largest-beta rows swamp the rest. Weights never use the estimated
/// SEs, which would correlate weight with the fluctuation. Coefficient errors
/// propagate each row's Monte-Carlo standard error through the linear map.
inline QuadraticFit fit_quadratic(const std::vector<SweepRow>& series) {
  std::vector<std::size_t> distinct;
  for (const auto& row : series) distinct.push_back(row.beta);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 5) {
    throw std::invalid_argument("fit_scaling: need at least 5 distinct beta points, got " +
                                std::to_string(distinct.size()));
  }

  const Eigen::Index n = static_cast<Eigen::Index>(series.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd var(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const SweepRow& row = series[static_cast<std::size_t>(i)];
    const double b = static_cast<double>(row.beta);
    x(i, 0) = 1.0;
    x(i, 1) = b;
    x(i, 2) = b * b;
    y(i) = row.estimate.mean;
    var(i) = row.estimate.std_error * row.estimate.std_error;
    double scale = std::isfinite(row.analytic) && row.analytic > 0.0 ? row.analytic : std::abs(row.estimate.mean);
    if (!(scale > 0.0)) scale = 1.0;
    w(i) = 1.0 / (scale * scale);
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::Vector3d coef = xw.colPivHouseholderQr().solve(sw.asDiagonal() * y);
  const Eigen::Matrix3d normal_inv = (xw.transpose() * xw).inverse();
  const Eigen::MatrixXd h = normal_inv * x.transpose() * w.asDiagonal();  // 3 x n
  const Eigen::Matrix3d cov = h * var.asDiagonal() * h.transpose();

  QuadraticFit fit;
  fit.c0 = coef(0);
  fit.c1 = coef(1);
  fit.c2 = coef(2);
  fit.se0 = std::sqrt(cov(0, 0));
  fit.se1 = std::sqrt(cov(1, 1));
  fit.se2 = std::sqrt(cov(2, 2));
  fit.n_points = series.size();
  fit.beta_max = distinct.back();
  return fit;
}

struct SeriesSelector {
  double r = 0.0;
  PsiMode mode = PsiMode::full;
  std::size_t min_beta = 1;  // 2 restricts a correlator series to its beta > 1 branch
};

inline QuadraticFit fit_scaling(const SweepResult& result, SeriesSelector sel) {
  std::vector<SweepRow> rows = result.series(sel.r, sel.mode);
  std::erase_if(rows, [&](const SweepRow& row) { return row.beta < sel.min_beta; });
  return fit_quadratic(rows);
}

}  // namespace chaoswpt
