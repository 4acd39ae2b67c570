#pragma once

#include <vector>

#include "atspec/model.hpp"

namespace atspec {

/// Fixed-step record of the driven-state amplitudes. The excited-state
/// amplitude is column 0 of every row, matching CoupledSystem::basis.
struct TimeTrajectory {
  std::vector<double> times;
  std::vector<std::vector<cplx>> amplitudes;
};

/// Emission intensity at `delta` from the resolvent: solves
/// (i delta I - A) x = x0 and returns g^2 |x_excited|^2, the squared
/// asymptotic amplitude of the emitted mode. This is the reference method
/// for every valid graph, exact up to linear-algebra roundoff.
///
/// The solve tolerates a singular but consistent system (free directions
/// are fixed at zero; they never involve the excited component, which stays
/// uniquely determined); an inconsistent system throws SingularSystem,
/// which cannot occur for gamma > 0.
double spectrum_linear_solve(const CoupledSystem& system, double delta);

/// Classical fixed-step 4th-order integration of dx/dt = A x from x0 over
/// [0, horizon]. The step count is at least 100 and rounded up to an even
/// value so the trajectory always offers an odd sample count to the
/// quadrature below. Throws InvalidStep unless horizon > 0, step > 0, and
/// step <= horizon/100. Typical values: horizon 50/gamma, step 1e-3/gamma.
TimeTrajectory integrate(const CoupledSystem& system, double horizon,
                         double step);

/// Composite Simpson quadrature of g * exp(-i delta t) * E(t) over the
/// trajectory; returns the squared magnitude. Converges to
/// spectrum_linear_solve as the horizon grows (the truncated tail decays
/// with the slowest component linewidth). Grid sweeps should integrate once
/// and call this per detuning.
double spectrum_from_trajectory(const TimeTrajectory& trajectory, double g,
                                double delta);

/// integrate() followed by spectrum_from_trajectory().
double spectrum_time_domain(const CoupledSystem& system, double delta,
                            double horizon, double step);

}  // namespace atspec
