#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "atspec/model.hpp"

namespace atspec {

/// A refined local maximum of a sampled spectrum.
struct Peak {
  double location = 0.0;
  double height = 0.0;
};

/// The quantities reported for a spectrum: interference zeros, components,
/// their widths, and how closely the widths add up to the decay rate.
struct SpectralReport {
  std::vector<double> dark_lines;
  std::vector<Peak> peaks;
  std::vector<double> fwhms;  ///< one per peak, same order
  double fwhm_sum = 0.0;
  double gamma = 1.0;
  double sum_rule_deviation = 0.0;  ///< |fwhm_sum - gamma| / gamma
};

using SpectrumFn = std::function<double(double)>;

/// Evaluate `fn` on a uniform grid of `points` detunings spanning
/// [dmin, dmax]. Throws InvalidGrid unless dmin < dmax (finite) and
/// points >= 3.
SpectrumSeries sample(const SpectrumFn& fn, double dmin, double dmax,
                      std::size_t points, Method method);

/// Strict interior local maxima above a floor of 1e-9 times the series
/// maximum, refined by three-point parabolic interpolation.
std::vector<Peak> find_peaks(const SpectrumSeries& series);

/// Full width at half maximum of `peak`: walk outward from the peak sample
/// to the first samples at or below half height, then bisect the linear
/// interpolant in each bracketing cell to 1e-9. Walking off either end of
/// the grid throws UnbracketedCrossing (the caller should widen the grid).
double fwhm(const SpectrumSeries& series, const Peak& peak);

/// Assemble a report from grid data alone. Dark lines are strict local
/// minima sampled below 1e-9 times the series maximum, so only zeros that
/// happen to lie on grid points are found; prefer the overload below when
/// the spectrum can be evaluated at arbitrary detunings.
SpectralReport report(const SpectrumSeries& series, double gamma);

/// Assemble a report with dark lines refined off-grid: every strict local
/// minimum is narrowed by golden-section minimization of `fn` over its
/// bracketing cells and reported as dark when the refined minimum falls
/// below 1e-9 times the series maximum. Grid values alone miss zeros that
/// fall between samples (quadratic growth around a zero leaves neighbors
/// well above the floor).
SpectralReport report(const SpectrumSeries& series, const SpectrumFn& fn,
                      double gamma);

/// Default detuning grid for a graph.
struct GridSpec {
  double dmin = -3.0;
  double dmax = 3.0;
  std::size_t points = 8001;
};

/// Symmetric grid +-(3 + 2R) with 8001 points, where R is the effective
/// Rabi magnitude for quartuplet/quintuplet graphs and the root of the
/// summed squared couplings otherwise.
GridSpec default_grid(const LinkageGraph& graph);

}  // namespace atspec
