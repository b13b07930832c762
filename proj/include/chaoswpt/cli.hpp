#pragma once

// Subcommand implementations behind the chaoswpt executable. Each command
// writes its table to `out`, diagnostics to `err`, and returns the exit code.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "chaoswpt/analytic.hpp"
#include "chaoswpt/config.hpp"
#include "chaoswpt/montecarlo.hpp"
#include "chaoswpt/verify.hpp"

namespace chaoswpt::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kToleranceViolation = 2 };

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("format", "expected csv or json, got '" + s + "'");
}

using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::map<std::string, std::string> legend;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              os << csv_escape(v);
            } else if constexpr (std::is_same_v<T, double>) {
              os << format_real(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

inline nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

inline void write_json(const Table& t, const nlohmann::json& config, std::ostream& os) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc{{"config", config}, {"legend", t.legend}, {"rows", rows}};
  os << doc.dump(2) << '\n';
}

inline void emit(const Table& t, const AppConfig& cfg, Format f, std::ostream& os) {
  if (f == Format::csv) {
    write_csv(t, os);
  } else {
    write_json(t, to_json(cfg), os);
  }
  os.flush();
}

inline Cell cell(std::size_t v) { return static_cast<std::int64_t>(v); }
inline Cell cell(double v) { return v; }
inline Cell cell(std::string v) { return v; }
inline Cell cell(std::string_view v) { return std::string(v); }

inline const std::map<std::string, std::string>& sweep_legend() {
  static const std::map<std::string, std::string> legend{
      {"beta", "spreading factor (chips per half symbol)"},
      {"r", "Tx-Rx distance [m]"},
      {"mode", "bypass = no correlator (psi=1), full = psi=2*beta correlator"},
      {"z_empirical", "Monte-Carlo harvested DC, model units"},
      {"z_stderr", "standard error of z_empirical"},
      {"z_analytic", "closed-form harvested DC, model units"},
      {"rel_dev", "|z_empirical - z_analytic| / z_analytic"},
      {"papr_analytic", "closed-form PAPR at the harvester input"},
  };
  return legend;
}

// ---------------------------------------------------------------------------

inline int cmd_sweep(const AppConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  Table t;
  t.columns = {"beta", "r", "mode", "z_empirical", "z_stderr", "z_analytic", "rel_dev", "papr_analytic"};
  t.legend = sweep_legend();
  const SweepResult res = sweep_beta(cfg.betas, cfg.distances, cfg.modes, cfg.run);
  for (const SweepRow& row : res.rows) {
    t.rows.push_back({cell(row.beta), cell(row.r), cell(to_string(row.mode)), cell(row.estimate.mean),
                      cell(row.estimate.std_error), cell(row.analytic), cell(row.rel_dev()),
                      cell(row.papr_analytic)});
  }
  if (res.failure) {
    const SweepFailure& f = *res.failure;
    t.rows.push_back({cell(std::string("FAILED")), cell(f.r), cell(to_string(f.mode)), cell(f.message),
                      Cell{}, Cell{}, Cell{}, Cell{}});
    emit(t, cfg, fmt, out);
    err << "sweep failed at beta=" << f.beta << " r=" << format_real(f.r) << " mode=" << to_string(f.mode)
        << ": " << f.message << '\n';
    return kUsageError;
  }
  emit(t, cfg, fmt, out);
  return kOk;
}

inline int cmd_run(const AppConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  const RunResult res = run_once(cfg.run);
  for (const auto& w : res.warnings) err << "warning: " << w << '\n';
  Table t;
  t.columns = {"beta",          "r",        "mode",           "z_empirical", "z_stderr", "z_analytic",
               "rel_dev",       "papr_analytic", "papr_empirical", "papr_stream", "n_frames"};
  t.legend = sweep_legend();
  t.legend["papr_empirical"] = "PAPR with per-symbol channel conditioning";
  t.legend["papr_stream"] = "raw whole-stream PAPR, fading included";
  t.legend["n_frames"] = "number of simulated DCSK symbols";
  const bool has_closed_form = cfg.run.psi_mode != PsiMode::window;
  const double rel = has_closed_form ? std::abs(res.estimate.mean - res.analytic) / res.analytic : std::nan("");
  const double papr_a = has_closed_form ? papr_analytic(cfg.run.psi_mode, cfg.run.beta) : std::nan("");
  t.rows.push_back({cell(cfg.run.beta), cell(cfg.run.r), cell(to_string(cfg.run.psi_mode)),
                    cell(res.estimate.mean), cell(res.estimate.std_error), cell(res.analytic), cell(rel),
                    cell(papr_a), cell(res.papr_empirical), cell(res.papr_stream), cell(res.estimate.n_frames)});
  emit(t, cfg, fmt, out);
  return kOk;
}

/// Analytic vs empirical PAPR for both receiver modes at the configured beta.
/// Exit 2 when the selected empirical PAPR exceeds its closed-form bound.
inline int cmd_papr(const AppConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  Table t;
  t.columns = {"beta", "mode", "papr_analytic", "papr_empirical", "papr_mode", "n_frames"};
  t.legend = {{"papr_empirical", "measured max/mean power at the harvester input"},
              {"papr_mode", "per_symbol = conditioned on each symbol's channel; stream = raw"}};
  bool violated = false;
  for (PsiMode mode : {PsiMode::bypass, PsiMode::full}) {
    RunConfig run = cfg.run;
    run.psi_mode = mode;
    const RunResult res = run_once(run);
    const double bound = papr_analytic(mode, run.beta);
    const double measured = cfg.papr_mode == PaprMode::stream ? res.papr_stream : res.papr_empirical;
    if (cfg.papr_mode == PaprMode::per_symbol && measured > bound) {
      violated = true;
      err << "PAPR bound violated for mode " << to_string(mode) << ": " << format_real(measured) << " > "
          << format_real(bound) << '\n';
    }
    t.rows.push_back({cell(run.beta), cell(to_string(mode)), cell(bound), cell(measured),
                      cell(to_string(cfg.papr_mode)), cell(run.n_frames)});
  }
  emit(t, cfg, fmt, out);
  return violated ? kToleranceViolation : kOk;
}

inline int cmd_crossover(const AppConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  if (!cfg.r_c || !cfg.r_nc) {
    err << "crossover: both r_c and r_nc must be set (e.g. --set r_c=30 --set r_nc=20)\n";
    return kUsageError;
  }
  const RhoParams rho = rho_params(cfg.run.circuit);
  const double alpha = cfg.run.alpha;
  const double bound = beta_crossover(*cfg.r_c, *cfg.r_nc, alpha, rho.rho1, rho.rho2);
  const std::size_t beta = minimal_crossover_beta(*cfg.r_c, *cfg.r_nc, alpha, rho.rho1, rho.rho2);
  const double zc = z_with_correlator({beta, *cfg.r_c, alpha, rho.rho1, rho.rho2});
  const double znc = z_without_correlator({beta, *cfg.r_nc, alpha, rho.rho1, rho.rho2});

  Table t;
  t.columns = {"r_c", "r_nc", "alpha", "bound", "minimal_beta", "z_c", "z_nc"};
  t.legend = {{"bound", "real-valued spreading-factor threshold"},
              {"minimal_beta", "smallest integer beta with z_c > z_nc"},
              {"z_c", "closed-form DC with correlator at r_c, minimal_beta"},
              {"z_nc", "closed-form DC without correlator at r_nc, minimal_beta"}};
  t.rows.push_back({cell(*cfg.r_c), cell(*cfg.r_nc), cell(alpha), cell(bound), cell(beta), cell(zc), cell(znc)});
  emit(t, cfg, fmt, out);
  if (!(zc > znc)) {
    err << "crossover: z_c does not exceed z_nc at beta=" << beta << '\n';
    return kToleranceViolation;
  }
  return kOk;
}

inline int cmd_verify_dist(const AppConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.samples = cfg.verify_samples;
  opt.seed = cfg.run.seed;
  opt.clt_betas = cfg.clt_betas;
  const std::vector<VerifyCheck> checks = verify_distributions(opt);

  Table t;
  t.columns = {"oracle", "check", "value", "target", "error", "tolerance", "pass"};
  t.legend = {{"mass", "integral of the continuous part; target is 1 - atom"},
              {"atom", "point mass at zero"},
              {"moment<k>", "E[X^k] by quadrature vs the closed-form coefficient (relative error)"},
              {"ks", "Kolmogorov-Smirnov distance to brute-force samples"}};
  bool ok = true;
  for (const VerifyCheck& c : checks) {
    ok = ok && c.pass;
    if (!c.pass) err << "FAIL " << c.oracle << ' ' << c.check << ": error " << format_real(c.error) << '\n';
    t.rows.push_back({cell(c.oracle), cell(c.check), cell(c.value), cell(c.target), cell(c.error),
                      cell(c.tolerance), cell(std::string(c.pass ? "true" : "false"))});
  }
  emit(t, cfg, fmt, out);
  return ok ? kOk : kToleranceViolation;
}

inline int dispatch(const std::string& sub, const AppConfig& cfg, Format fmt, std::ostream& out,
                    std::ostream& err) {
  if (sub == "sweep") return cmd_sweep(cfg, fmt, out, err);
  if (sub == "run") return cmd_run(cfg, fmt, out, err);
  if (sub == "papr") return cmd_papr(cfg, fmt, out, err);
  if (sub == "crossover") return cmd_crossover(cfg, fmt, out, err);
  if (sub == "verify-dist") return cmd_verify_dist(cfg, fmt, out, err);
  err << "unknown subcommand '" << sub << "'\n";
  return kUsageError;
}

}  // namespace chaoswpt::cli
