#include "atspec/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "atspec/closed_form.hpp"

namespace atspec {

namespace {

constexpr double kDarkFloor = 1e-9;  // relative to the series maximum

double series_max(const SpectrumSeries& series) {
  double top = 0.0;
  for (const double y : series.values) {
    top = std::max(top, y);
  }
  return top;
}

/// Golden-section minimization of fn over [a, b]; returns the interval
/// midpoint after 48 shrinks (interval width ~ 1e-10 of the original).
double golden_minimize(const SpectrumFn& fn, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int iter = 0; iter < 48; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bisect the linear interpolant between grid points (x0,y0) and (x1,y1)
/// for the crossing of `level`, to an interval of 1e-9.
double bisect_crossing(double x0, double y0, double x1, double y1,
                       double level) {
  double lo = x0;
  double hi = x1;
  const double slope = (y1 - y0) / (x1 - x0);
  auto f = [&](double x) { return y0 + slope * (x - x0) - level; };
  double flo = f(lo);
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::size_t nearest_index(const SpectrumSeries& series, double x) {
  const std::size_t n = series.deltas.size();
  const double h = (series.deltas.back() - series.deltas.front()) /
                   static_cast<double>(n - 1);
  const double pos = (x - series.deltas.front()) / h;
  const long long k = std::llround(pos);
  if (k < 0) {
    return 0;
  }
  if (k >= static_cast<long long>(n)) {
    return n - 1;
  }
  return static_cast<std::size_t>(k);
}

SpectralReport assemble(const SpectrumSeries& series, double gamma,
                        std::vector<double> dark_lines) {
  SpectralReport result;
  result.gamma = gamma;
  result.dark_lines = std::move(dark_lines);
  result.peaks = find_peaks(series);
  result.fwhms.reserve(result.peaks.size());
  for (const Peak& peak : result.peaks) {
    result.fwhms.push_back(fwhm(series, peak));
  }
  result.fwhm_sum = 0.0;
  for (const double w : result.fwhms) {
    result.fwhm_sum += w;
  }
  result.sum_rule_deviation = std::abs(result.fwhm_sum - gamma) / gamma;
  return result;
}

}  // namespace

SpectrumSeries sample(const SpectrumFn& fn, double dmin, double dmax,
                      std::size_t points, Method method) {
  if (!std::isfinite(dmin) || !std::isfinite(dmax) || dmin >= dmax) {
    throw InvalidGrid("grid bounds must be finite with dmin < dmax");
  }
  if (points < 3) {
    throw InvalidGrid("grid must have at least 3 points");
  }
  SpectrumSeries series;
  series.method = method;
  series.deltas.reserve(points);
  series.values.reserve(points);
  const double h = (dmax - dmin) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double x =
        k + 1 == points ? dmax : dmin + static_cast<double>(k) * h;
    series.deltas.push_back(x);
    series.values.push_back(fn(x));
  }
  return series;
}

std::vector<Peak> find_peaks(const SpectrumSeries& series) {
  const auto& xs = series.deltas;
  const auto& ys = series.values;
  const double floor = kDarkFloor * series_max(series);

  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (!(ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) || ys[i] <= floor) {
      continue;
    }
    // Parabola through the three samples around the maximum.
    const double y0 = ys[i - 1];
    const double y1 = ys[i];
    const double y2 = ys[i + 1];
    const double h = xs[i + 1] - xs[i];
    const double denom = y0 - 2.0 * y1 + y2;  // < 0 at a strict maximum
    const double offset = 0.5 * (y0 - y2) / denom;
    peaks.push_back(Peak{xs[i] + offset * h,
                         y1 - 0.25 * (y0 - y2) * offset});
  }
  return peaks;
}

double fwhm(const SpectrumSeries& series, const Peak& peak) {
  const auto& xs = series.deltas;
  const auto& ys = series.values;
  const std::size_t n = ys.size();
  const double half = 0.5 * peak.height;
  const std::size_t center = nearest_index(series, peak.location);

  std::size_t right = center;
  while (right + 1 < n && ys[right + 1] > half) {
    ++right;
  }
  if (right + 1 == n) {
    throw UnbracketedCrossing(
        "right half-maximum crossing lies beyond the grid");
  }
  std::size_t left = center;
  while (left > 0 && ys[left - 1] > half) {
    --left;
  }
  if (left == 0) {
    throw UnbracketedCrossing(
        "left half-maximum crossing lies beyond the grid");
  }

  const double right_x = bisect_crossing(xs[right], ys[right], xs[right + 1],
                                         ys[right + 1], half);
  const double left_x = bisect_crossing(xs[left - 1], ys[left - 1], xs[left],
                                        ys[left], half);
  return right_x - left_x;
}

SpectralReport report(const SpectrumSeries& series, double gamma) {
  const auto& xs = series.deltas;
  const auto& ys = series.values;
  const double floor = kDarkFloor * series_max(series);

  std::vector<double> dark_lines;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (ys[i] < ys[i - 1] && ys[i] < ys[i + 1] && ys[i] < floor) {
      dark_lines.push_back(xs[i]);
    }
  }
  return assemble(series, gamma, std::move(dark_lines));
}

SpectralReport report(const SpectrumSeries& series, const SpectrumFn& fn,
                      double gamma) {
  const auto& xs = series.deltas;
  const auto& ys = series.values;
  const double floor = kDarkFloor * series_max(series);

  std::vector<double> dark_lines;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (!(ys[i] < ys[i - 1] && ys[i] < ys[i + 1])) {
      continue;
    }
    // A zero between samples leaves both neighbors far above the floor
    // (the spectrum grows quadratically away from it), so grid values
    // cannot decide darkness; minimize the live evaluator instead.
    const double candidate = golden_minimize(fn, xs[i - 1], xs[i + 1]);
    if (fn(candidate) < floor) {
      dark_lines.push_back(candidate);
    }
  }
  return assemble(series, gamma, std::move(dark_lines));
}

GridSpec default_grid(const LinkageGraph& graph) {
  const auto match = match_topology(graph);
  double r = 0.0;
  if (match && (match->topology == PresetTopology::Quartuplet ||
                match->topology == PresetTopology::Quintuplet)) {
    r = effective_rabi(graph);
  } else {
    double sum = 0.0;
    for (const auto& c : graph.couplings) {
      sum += c.rabi * c.rabi;
    }
    r = std::sqrt(sum);
  }
  const double span = 3.0 + 2.0 * r;
  return GridSpec{-span, span, 8001};
}

}  // namespace atspec
