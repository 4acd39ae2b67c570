// atspec: sample multiplet emission spectra from linkage graphs, analyze
// their features, and cross-check the independent evaluation routes.
//
// Exit codes: 0 success, 1 verification threshold violation, 2 usage or
// configuration error (message names the offending flag or file line),
// 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "atspec/analysis.hpp"
#include "atspec/closed_form.hpp"
#include "atspec/dressed.hpp"
#include "atspec/errors.hpp"
#include "atspec/linkage.hpp"
#include "atspec/model.hpp"
#include "atspec/oracle.hpp"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

/// Flag misuse detected after CLI11 parsing. Maps to exit 2.
class UsageError : public atspec::Error {
  using Error::Error;
};

struct RunOptions {
  std::string preset_name;
  std::string file_path;
  std::vector<double> rabi;
  std::optional<double> phase;
  std::optional<double> gamma;
  std::optional<double> dmin;
  std::optional<double> dmax;
  std::optional<double> horizon;
  std::optional<double> step;
  std::size_t points = 8001;
  std::string method = "oracle";
  std::string format = "csv";
  std::string out_path;
  bool unit_peak = false;
  bool inject_defect = false;
};

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

void check_input_flags(const RunOptions& opt) {
  const bool has_preset = !opt.preset_name.empty();
  const bool has_file = !opt.file_path.empty();
  if (has_preset == has_file) {
    throw UsageError("exactly one of --preset or --file is required");
  }
  if (has_file && !opt.rabi.empty()) {
    throw UsageError("--rabi applies only to --preset runs");
  }
  if (has_file && opt.phase.has_value()) {
    throw UsageError("--phase applies only to --preset runs");
  }
  if (opt.gamma.has_value() &&
      !(std::isfinite(*opt.gamma) && *opt.gamma > 0.0)) {
    throw UsageError("--gamma: a positive finite decay rate is required");
  }
  if ((opt.horizon.has_value() || opt.step.has_value()) &&
      opt.method != "time") {
    throw UsageError("--horizon/--step apply only to --method time");
  }
}

atspec::LinkageGraph load_graph(const RunOptions& opt) {
  if (!opt.preset_name.empty()) {
    try {
      return atspec::preset(opt.preset_name, opt.rabi,
                            opt.phase.value_or(0.0));
    } catch (const atspec::UnknownPreset& e) {
      throw atspec::UnknownPreset(std::string("--preset: ") + e.what());
    } catch (const atspec::ArityMismatch& e) {
      throw atspec::ArityMismatch(std::string("--rabi: ") + e.what());
    }
  }
  std::ifstream in(opt.file_path, std::ios::binary);
  if (!in) {
    throw UsageError("--file: cannot open '" + opt.file_path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return atspec::parse(text.str());
  } catch (const atspec::ParseError& e) {
    // The message already carries the line and column.
    throw atspec::InvalidGraph("--file '" + opt.file_path + "': " + e.what());
  }
}

atspec::LinkageGraph resolve_graph(const RunOptions& opt) {
  check_input_flags(opt);
  atspec::LinkageGraph graph = load_graph(opt);
  if (opt.gamma.has_value()) graph.gamma = *opt.gamma;
  return graph;
}

atspec::GridSpec resolve_grid(const atspec::LinkageGraph& graph,
                              const RunOptions& opt) {
  atspec::GridSpec grid = atspec::default_grid(graph);
  if (opt.dmin.has_value()) grid.dmin = *opt.dmin;
  if (opt.dmax.has_value()) grid.dmax = *opt.dmax;
  grid.points = opt.points;
  if (!(std::isfinite(grid.dmin) && std::isfinite(grid.dmax)) ||
      grid.dmin >= grid.dmax) {
    throw UsageError("--dmin/--dmax: bounds must be finite and ordered (got " +
                     atspec::format_shortest(grid.dmin) + " >= " +
                     atspec::format_shortest(grid.dmax) + ")");
  }
  if (grid.points < 3) {
    throw UsageError("--points: at least 3 grid points are required");
  }
  return grid;
}

struct Evaluator {
  atspec::SpectrumFn fn;
  atspec::Method method = atspec::Method::LinearSolve;
};

Evaluator closed_form_evaluator(const atspec::LinkageGraph& graph) {
  const auto match = atspec::match_topology(graph);
  if (!match) {
    throw UsageError(
        "--method closed requires a graph matching a preset topology "
        "(use --method oracle or time)");
  }
  const double gamma = graph.gamma;
  switch (match->topology) {
    case atspec::PresetTopology::Doublet: {
      const double o1 = match->rabi[0];
      return {[o1, gamma](double d) {
                return atspec::spectrum_doublet(o1, gamma, 1.0, d);
              },
              atspec::Method::ClosedForm};
    }
    case atspec::PresetTopology::Triplet: {
      if (std::abs(std::sin(match->phase)) >= 1e-12) {
        throw UsageError(
            "--method closed: the three-field loop closed form covers zero "
            "loop phase only (sin(phase) = " +
            atspec::format_shortest(std::sin(match->phase)) + ")");
      }
      const double o1 = match->rabi[0];
      const double m1 = match->rabi[1];
      const double m2 = match->rabi[2];
      return {[o1, m1, m2, gamma](double d) {
                return atspec::spectrum_triplet(o1, m1, m2, gamma, 1.0, d);
              },
              atspec::Method::ClosedForm};
    }
    case atspec::PresetTopology::Quartuplet: {
      const atspec::QuartupletParams params = atspec::quartuplet_params(graph);
      return {[params](double d) {
                return atspec::spectrum_quartuplet(params, d);
              },
              atspec::Method::ClosedForm};
    }
    case atspec::PresetTopology::Quintuplet: {
      const atspec::QuintupletParams params = atspec::quintuplet_params(graph);
      return {[params](double d) {
                return atspec::spectrum_quintuplet(params, d);
              },
              atspec::Method::ClosedForm};
    }
    case atspec::PresetTopology::Sextuplet:
      throw UsageError(
          "--method closed: no closed form exists for the sextuplet topology "
          "(use --method oracle or time)");
  }
  throw UsageError("--method closed: unhandled topology");
}

Evaluator dressed_evaluator(const atspec::LinkageGraph& graph) {
  const auto match = atspec::match_topology(graph);
  if (!match || (match->topology != atspec::PresetTopology::Quartuplet &&
                 match->topology != atspec::PresetTopology::Quintuplet)) {
    throw UsageError(
        "--method dressed supports the quartuplet and quintuplet topologies "
        "only");
  }
  atspec::DressedDecomposition dec;
  if (match->topology == atspec::PresetTopology::Quartuplet) {
    dec = atspec::residues_numeric(atspec::quartuplet_params(graph));
  } else {
    dec = atspec::residues_numeric(atspec::quintuplet_params(graph));
  }
  return {[dec](double d) { return atspec::spectrum_decomposed(dec, d); },
          atspec::Method::Dressed};
}

Evaluator make_evaluator(const atspec::LinkageGraph& graph,
                         const RunOptions& opt) {
  if (opt.method == "closed") return closed_form_evaluator(graph);
  if (opt.method == "dressed") return dressed_evaluator(graph);
  if (opt.method == "time") {
    const atspec::CoupledSystem sys = atspec::compile(graph);
    const double horizon = opt.horizon.value_or(50.0 / graph.gamma);
    const double step = opt.step.value_or(1e-3 / graph.gamma);
    atspec::TimeTrajectory traj;
    try {
      traj = atspec::integrate(sys, horizon, step);
    } catch (const atspec::InvalidStep& e) {
      throw atspec::InvalidStep(std::string("--horizon/--step: ") + e.what());
    }
    const double g = sys.g;
    return {[traj, g](double d) {
              return atspec::spectrum_from_trajectory(traj, g, d);
            },
            atspec::Method::TimeDomain};
  }
  const atspec::CoupledSystem sys = atspec::compile(graph);
  return {[sys](double d) { return atspec::spectrum_linear_solve(sys, d); },
          atspec::Method::LinearSolve};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  // Temp-and-rename so a crashed run never leaves a truncated output file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out.good()) {
      std::remove(tmp.c_str());
      throw UsageError("--out: cannot write '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw UsageError("--out: cannot replace '" + path + "'");
  }
}

std::string render_csv(const atspec::SpectrumSeries& series) {
  std::string out = "delta,intensity\n";
  for (std::size_t i = 0; i < series.deltas.size(); ++i) {
    out += atspec::format_shortest(series.deltas[i]);
    out += ',';
    out += atspec::format_shortest(series.values[i]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json grid_json(const atspec::GridSpec& grid) {
  return {{"dmin", grid.dmin},
          {"dmax", grid.dmax},
          {"points", grid.points}};
}

std::string render_spectrum_json(const atspec::SpectrumSeries& series,
                                 double gamma, const atspec::GridSpec& grid) {
  nlohmann::ordered_json j;
  j["method"] = atspec::to_string(series.method);
  j["gamma"] = gamma;
  j["grid"] = grid_json(grid);
  j["deltas"] = series.deltas;
  j["intensities"] = series.values;
  return j.dump(2) + "\n";
}

int cmd_spectrum(const RunOptions& opt) {
  const atspec::LinkageGraph graph = resolve_graph(opt);
  const Evaluator ev = make_evaluator(graph, opt);
  const atspec::GridSpec grid = resolve_grid(graph, opt);
  atspec::SpectrumSeries series =
      atspec::sample(ev.fn, grid.dmin, grid.dmax, grid.points, ev.method);
  if (opt.unit_peak) {
    const double top =
        *std::max_element(series.values.begin(), series.values.end());
    if (top > 0.0) {
      for (double& v : series.values) v /= top;
    }
  }
  const std::string text = opt.format == "json"
                               ? render_spectrum_json(series, graph.gamma, grid)
                               : render_csv(series);
  write_output(opt.out_path, text);
  return 0;
}

int cmd_report(const RunOptions& opt) {
  const atspec::LinkageGraph graph = resolve_graph(opt);
  const Evaluator ev = make_evaluator(graph, opt);
  atspec::GridSpec grid = resolve_grid(graph, opt);

  atspec::SpectralReport rep;
  atspec::SpectrumSeries series;
  // A peak whose half-maximum crossing falls outside the window cannot be
  // measured; widen and retry a bounded number of times before giving up.
  for (int attempt = 0;; ++attempt) {
    series = atspec::sample(ev.fn, grid.dmin, grid.dmax, grid.points,
                            ev.method);
    try {
      rep = atspec::report(series, ev.fn, graph.gamma);
      break;
    } catch (const atspec::UnbracketedCrossing& e) {
      if (attempt >= 5) throw;
      const double mid = 0.5 * (grid.dmax + grid.dmin);
      const double half = 0.75 * (grid.dmax - grid.dmin);
      grid.dmin = mid - half;
      grid.dmax = mid + half;
      std::cerr << "note: " << e.what() << "; widening the window to ["
                << atspec::format_shortest(grid.dmin) << ", "
                << atspec::format_shortest(grid.dmax) << "]\n";
    }
  }

  nlohmann::ordered_json j;
  j["method"] = atspec::to_string(series.method);
  j["gamma"] = rep.gamma;
  j["dark_lines"] = rep.dark_lines;
  j["peaks"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rep.peaks.size(); ++i) {
    j["peaks"].push_back({{"location", rep.peaks[i].location},
                          {"height", rep.peaks[i].height},
                          {"fwhm", rep.fwhms[i]}});
  }
  j["fwhm_sum"] = rep.fwhm_sum;
  j["sum_rule_deviation"] = rep.sum_rule_deviation;
  j["grid"] = grid_json(grid);
  write_output(opt.out_path, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// verify: evaluate the same spectrum by every applicable route and compare.

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + h * static_cast<double>(i);
  }
  xs.back() = hi;
  return xs;
}

struct VerifyTable {
  int failures = 0;

  void emit(const char* status, const std::string& name,
            const std::string& detail) {
    std::printf("%-4s  %-46s %s\n", status, name.c_str(), detail.c_str());
  }
  void check(bool ok, const std::string& name, const std::string& detail) {
    emit(ok ? "PASS" : "FAIL", name, detail);
    if (!ok) ++failures;
  }
  void info(const std::string& name, const std::string& detail) {
    emit("INFO", name, detail);
  }
  void skip(const std::string& name, const std::string& detail) {
    emit("SKIP", name, detail);
  }
};

struct Deviation {
  double rel = 0.0;        ///< worst relative gap away from spectrum zeros
  double near_zero = 0.0;  ///< worst absolute gap within 1e-6 of a zero
};

/// Compare two evaluation routes over `xs`. Within 1e-6 of an analytic
/// spectrum zero both routes produce values at the cancellation floor, so
/// relative error is meaningless there and an absolute bound applies.
Deviation max_deviation(const std::vector<double>& xs,
                        const atspec::SpectrumFn& route_a,
                        const atspec::SpectrumFn& route_b,
                        const std::vector<double>& zeros, double defect) {
  Deviation dev;
  for (const double x : xs) {
    bool near = false;
    for (const double z : zeros) {
      if (std::abs(x - z) < 1e-6) {
        near = true;
        break;
      }
    }
    const double a = route_a(x) * defect;
    const double b = route_b(x);
    const double gap = std::abs(a - b);
    if (near) {
      dev.near_zero = std::max(dev.near_zero, gap);
    } else {
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) dev.rel = std::max(dev.rel, gap / scale);
    }
  }
  return dev;
}

void closed_vs_oracle_row(VerifyTable& t, const std::vector<double>& xs,
                          const atspec::SpectrumFn& closed,
                          const atspec::SpectrumFn& oracle,
                          const std::vector<double>& zeros, double defect) {
  const Deviation dev = max_deviation(xs, closed, oracle, zeros, defect);
  t.check(dev.rel < 1e-9 && dev.near_zero < 1e-12,
          "closed form vs linear solve",
          fmt("max rel %.2e (limit 1e-09), near-zero abs %.2e (limit 1e-12)",
              dev.rel, dev.near_zero));
}

void char_poly_row(VerifyTable& t, const atspec::CharPoly& from_params,
                   const atspec::CharPoly& from_matrix, double defect) {
  double top = 0.0;
  double gap = 0.0;
  const std::size_t n = std::min(from_params.coefficients.size(),
                                 from_matrix.coefficients.size());
  for (std::size_t i = 0; i < n; ++i) {
    top = std::max(top, std::abs(from_matrix.coefficients[i]));
    gap = std::max(gap, std::abs(from_params.coefficients[i] * defect -
                                 from_matrix.coefficients[i]));
  }
  const bool sized =
      from_params.coefficients.size() == from_matrix.coefficients.size();
  t.check(sized && gap <= 1e-9 * top,
          "characteristic polynomial routes",
          fmt("max coefficient gap %.2e (limit %.2e)", gap, 1e-9 * top));
}

void time_rows(VerifyTable& t, const atspec::CoupledSystem& sys,
               const atspec::SpectrumFn& oracle, const std::vector<double>& xs,
               double gamma, double defect) {
  // Compare at the tallest peaks: near dark lines the spectrum is tiny and
  // the finite-window tail dominates any relative measure.
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = oracle(xs[i]);
  std::vector<std::pair<double, double>> tops;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) {
      tops.emplace_back(ys[i], xs[i]);
    }
  }
  std::sort(tops.begin(), tops.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> spots;
  for (std::size_t i = 0; i < tops.size() && i < 3; ++i) {
    spots.push_back(tops[i].second);
  }
  if (spots.empty()) spots.push_back(0.0);

  const auto worst_at = [&](double horizon_gammas) {
    const atspec::TimeTrajectory traj =
        atspec::integrate(sys, horizon_gammas / gamma, 1e-3 / gamma);
    double worst = 0.0;
    for (const double d : spots) {
      const double a =
          atspec::spectrum_from_trajectory(traj, sys.g, d) * defect;
      const double b = oracle(d);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
    return worst;
  };
  t.info("time domain vs linear solve (T = 50/gamma)",
         fmt("max rel %.2e at peak detunings; finite-window tail, "
             "informational",
             worst_at(50.0)));

  // The truncated tail decays like exp(-w T) with w the slowest component
  // half-width, so the horizon that certifies 1e-4 scales with 1/w.
  double w_min = gamma / 2.0;
  for (const atspec::cplx& xi : atspec::find_roots(atspec::char_poly(sys))) {
    if (xi.imag() > 1e-9) w_min = std::min(w_min, xi.imag());
  }
  const double certify = std::clamp(12.0 / w_min, 200.0, 2000.0);
  const double r_end = worst_at(certify);
  t.check(r_end <= 1e-4,
          fmt("time domain vs linear solve (T = %.0f/gamma)", certify),
          fmt("max rel %.2e (limit 1e-04)", r_end));
}

int cmd_verify(const RunOptions& opt) {
  const atspec::LinkageGraph graph = resolve_graph(opt);
  const auto match = atspec::match_topology(graph);
  if (!match) {
    throw UsageError(
        "verify requires a graph matching a preset topology (--preset or an "
        "equivalent --file)");
  }
  const double defect = opt.inject_defect ? 1.0 + 1e-6 : 1.0;
  const double gamma = graph.gamma;

  const atspec::GridSpec window = atspec::default_grid(graph);
  const std::vector<double> xs = linspace(window.dmin, window.dmax, 501);
  const std::vector<double> xs_fine = linspace(window.dmin, window.dmax, 2001);

  const atspec::CoupledSystem sys = atspec::compile(graph);
  const atspec::SpectrumFn oracle = [&sys](double d) {
    return atspec::spectrum_linear_solve(sys, d);
  };

  VerifyTable t;
  using atspec::PresetTopology;
  switch (match->topology) {
    case PresetTopology::Doublet: {
      const double o1 = match->rabi[0];
      closed_vs_oracle_row(
          t, xs,
          [&](double d) { return atspec::spectrum_doublet(o1, gamma, 1.0, d); },
          oracle, {0.0}, defect);
      break;
    }
    case PresetTopology::Triplet: {
      const double o1 = match->rabi[0];
      const double m1 = match->rabi[1];
      const double m2 = match->rabi[2];
      if (std::abs(std::sin(match->phase)) < 1e-12) {
        closed_vs_oracle_row(
            t, xs,
            [&](double d) {
              return atspec::spectrum_triplet(o1, m1, m2, gamma, 1.0, d);
            },
            oracle, {-m1, m1}, defect);
      } else {
        t.skip("closed form vs linear solve",
               "the three-field loop closed form covers zero loop phase only");
      }
      break;
    }
    case PresetTopology::Quartuplet: {
      const atspec::QuartupletParams params = atspec::quartuplet_params(graph);
      const std::vector<double> zeros = atspec::dark_lines(params);
      const atspec::SpectrumFn closed = [params](double d) {
        return atspec::spectrum_quartuplet(params, d);
      };
      closed_vs_oracle_row(t, xs, closed, oracle, zeros, defect);

      try {
        const atspec::DressedDecomposition dec =
            atspec::residues_numeric(params);
        const Deviation dev = max_deviation(
            xs,
            [&dec](double d) { return atspec::spectrum_decomposed(dec, d); },
            closed, zeros, defect);
        t.check(dev.rel < 1e-8 && dev.near_zero < 1e-12,
                "dressed decomposition vs closed form",
                fmt("max rel %.2e (limit 1e-08), near-zero abs %.2e "
                    "(limit 1e-12)",
                    dev.rel, dev.near_zero));
      } catch (const atspec::DegenerateRoots& e) {
        t.skip("dressed decomposition vs closed form", e.what());
      }

      char_poly_row(t, atspec::char_poly(params), atspec::char_poly(sys),
                    defect);

      // Cutting all couplings but o1 must reproduce the two-level line.
      atspec::QuartupletParams cut = params;
      cut.o2 = cut.m1 = cut.m2 = 0.0;
      const Deviation red = max_deviation(
          xs_fine,
          [cut](double d) { return atspec::spectrum_quartuplet(cut, d); },
          [&](double d) {
            return atspec::spectrum_doublet(cut.o1, gamma, 1.0, d);
          },
          {0.0}, defect);
      t.check(red.rel < 1e-12 && red.near_zero < 1e-12,
              "degenerate loop reduces to the doublet",
              fmt("max rel %.2e (limit 1e-12)", red.rel));
      break;
    }
    case PresetTopology::Quintuplet: {
      const atspec::QuintupletParams params = atspec::quintuplet_params(graph);
      const std::vector<double> zeros = atspec::dark_lines(params);
      const atspec::SpectrumFn closed = [params](double d) {
        return atspec::spectrum_quintuplet(params, d);
      };
      closed_vs_oracle_row(t, xs, closed, oracle, zeros, defect);

      try {
        const atspec::DressedDecomposition dec =
            atspec::residues_numeric(params);
        const Deviation dev = max_deviation(
            xs,
            [&dec](double d) { return atspec::spectrum_decomposed(dec, d); },
            closed, zeros, defect);
        t.check(dev.rel < 1e-8 && dev.near_zero < 1e-12,
                "dressed decomposition vs closed form",
                fmt("max rel %.2e (limit 1e-08), near-zero abs %.2e "
                    "(limit 1e-12)",
                    dev.rel, dev.near_zero));
      } catch (const atspec::DegenerateRoots& e) {
        t.skip("dressed decomposition vs closed form", e.what());
      }

      char_poly_row(t, atspec::char_poly(params), atspec::char_poly(sys),
                    defect);

      // Cutting o2 and m3 collapses the chain onto the four-field loop.
      atspec::QuintupletParams cut4 = params;
      cut4.o2 = cut4.m3 = 0.0;
      atspec::QuartupletParams quad;
      quad.o1 = cut4.o1;
      quad.m1 = cut4.m1;
      quad.m2 = cut4.m2;
      quad.phase = cut4.phase;
      quad.gamma = gamma;
      const double m = std::sqrt(quad.m1 * quad.m1 + quad.m2 * quad.m2);
      const Deviation red4 = max_deviation(
          xs_fine,
          [cut4](double d) { return atspec::spectrum_quintuplet(cut4, d); },
          [quad](double d) { return atspec::spectrum_quartuplet(quad, d); },
          {-m, 0.0, m}, defect);
      t.check(red4.rel < 1e-12 && red4.near_zero < 1e-12,
              "degenerate chain reduces to the quartuplet",
              fmt("max rel %.2e (limit 1e-12)", red4.rel));

      // Cutting o2 and m2 leaves the three-level chain. The detunings at
      // +-m3 are removable 0/0 points of the unfactored quintic forms;
      // when m3 == m1 they coincide with a dark line and the quartic
      // numerator loses digits as 1/delta^2 nearby, so this row carries a
      // looser limit than the exact reductions above.
      atspec::QuintupletParams cut3 = params;
      cut3.o2 = cut3.m2 = 0.0;
      const Deviation red3 = max_deviation(
          xs_fine,
          [cut3](double d) { return atspec::spectrum_quintuplet(cut3, d); },
          [&](double d) {
            return atspec::spectrum_triplet(cut3.o1, cut3.m1, 0.0, gamma, 1.0,
                                            d);
          },
          {-cut3.m1, cut3.m1, -cut3.m3, cut3.m3}, defect);
      t.check(red3.rel < 1e-9 && red3.near_zero < 1e-12,
              "degenerate chain reduces to the triplet",
              fmt("max rel %.2e (limit 1e-09)", red3.rel));
      break;
    }
    case PresetTopology::Sextuplet: {
      t.info("closed form vs linear solve",
             "no closed form exists for this topology; oracle routes only");
      break;
    }
  }

  time_rows(t, sys, oracle, xs, gamma, defect);

  if (t.failures == 0) {
    std::printf("all checks passed\n");
    return 0;
  }
  std::printf("%d check(s) failed\n", t.failures);
  return kExitVerifyFailure;
}

template <typename Body>
int guarded(Body&& body) {
  const auto numeric = [](const char* kind, const std::exception& e) {
    std::cerr << "numerical failure (" << kind << "): " << e.what() << '\n';
    return kExitNumeric;
  };
  try {
    return body();
  } catch (const atspec::NoConvergence& e) {
    return numeric("root iteration", e);
  } catch (const atspec::DegenerateRoots& e) {
    return numeric("degenerate roots", e);
  } catch (const atspec::DegenerateDarkLines& e) {
    return numeric("degenerate dark lines", e);
  } catch (const atspec::SingularSystem& e) {
    return numeric("singular system", e);
  } catch (const atspec::NonFinite& e) {
    return numeric("non-finite value", e);
  } catch (const atspec::UnbracketedCrossing& e) {
    return numeric("unbracketed half-maximum crossing", e);
  } catch (const atspec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

void add_input_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--preset", opt.preset_name,
                  "Preset topology: doublet, triplet, quartuplet, quintuplet, "
                  "or sextuplet");
  cmd->add_option("--file", opt.file_path, "Linkage file to load");
  cmd->add_option("--rabi", opt.rabi,
                  "Comma-separated coupling magnitudes in the preset's "
                  "documented order")
      ->delimiter(',');
  cmd->add_option("--phase", opt.phase, "Loop phase in radians (presets only)");
  cmd->add_option("--gamma", opt.gamma, "Override the decay rate (default 1)");
  cmd->add_option("--method", opt.method,
                  "Evaluation route: closed, dressed, oracle, or time "
                  "(default oracle)")
      ->check(CLI::IsMember({"closed", "dressed", "oracle", "time"}));
}

void add_grid_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--dmin", opt.dmin,
                  "Lower detuning bound (default: topology window)");
  cmd->add_option("--dmax", opt.dmax,
                  "Upper detuning bound (default: topology window)");
  cmd->add_option("--points", opt.points, "Grid size (default 8001)");
  cmd->add_option("--out", opt.out_path, "Output path (default: stdout)");
  cmd->add_option("--horizon", opt.horizon,
                  "Time-domain integration horizon (default 50/gamma)");
  cmd->add_option("--step", opt.step,
                  "Time-domain integration step (default 1e-3/gamma)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "atspec: emission spectra of multiplet linkage graphs.\n"
      "Computes the spectrum by closed form, dressed-state decomposition,\n"
      "Laplace-domain linear solve, or time-domain integration."};
  app.require_subcommand(1);

  RunOptions opt;

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Sample the spectrum onto a grid and emit CSV or JSON");
  add_input_options(spectrum, opt);
  add_grid_options(spectrum, opt);
  spectrum
      ->add_option("--format", opt.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_flag("--unit-peak", opt.unit_peak,
                     "Rescale so the tallest sample is 1");

  CLI::App* report = app.add_subcommand(
      "report",
      "Analyze the spectrum: dark lines, peaks, widths, and the width sum "
      "rule (JSON)");
  add_input_options(report, opt);
  add_grid_options(report, opt);

  CLI::App* verify = app.add_subcommand(
      "verify",
      "Evaluate by every applicable route and compare against thresholds");
  add_input_options(verify, opt);
  verify->add_flag("--inject-defect", opt.inject_defect, "")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  return guarded([&]() -> int {
    if (app.got_subcommand(spectrum)) return cmd_spectrum(opt);
    if (app.got_subcommand(report)) return cmd_report(opt);
    return cmd_verify(opt);
  });
}
