#pragma once

#include <vector>

#include "atspec/model.hpp"

namespace atspec {

/// Parameters of the four-field loop spectrum: two optical couplings o1, o2
/// off the excited state and two microwave couplings m1, m2 closing the
/// loop, plus the observable loop phase. Magnitudes are in units of gamma.
struct QuartupletParams {
  double o1 = 0.0;
  double o2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double phase = 0.0;
  double gamma = 1.0;
  double g = 1.0;
};

/// Five-field parameters: the quartuplet loop plus a third microwave
/// coupling m3 to a pendant state.
struct QuintupletParams {
  double o1 = 0.0;
  double o2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double phase = 0.0;
  double gamma = 1.0;
  double g = 1.0;
};

/// Throw InvalidParams unless magnitudes are finite and nonnegative,
/// gamma is positive, and g is nonnegative.
void validate(const QuartupletParams& params);
void validate(const QuintupletParams& params);

/// Emission intensity of the quartuplet at detuning `delta`:
///   S = g^2 N^2 / (P^2 + (gamma^2/4) N^2)
/// with N = d(d^2 - m1^2 - m2^2) and
/// P = d^4 - (o1^2 + o2^2 + m1^2 + m2^2) d^2 + K,
/// K = o1^2 m2^2 + o2^2 m1^2 + 2 o1 o2 m1 m2 sin(phase).
/// Removable 0/0 points evaluate to their limits (see vanishing_order note
/// in the implementation); dark lines return exactly 0.
double spectrum_quartuplet(const QuartupletParams& params, double delta);

/// Quintuplet intensity, same rational shape with
/// N = d^4 - A d^2 + B, A = m1^2 + m2^2 + m3^2, B = m1^2 m3^2, and
/// P = d^5 - (o1^2 + o2^2 + A) d^3 + C d,
/// C = o1^2 m2^2 + o1^2 m3^2 + o2^2 m1^2 + m1^2 m3^2
///     - 2 o1 o2 m1 m2 cos(phase).
double spectrum_quintuplet(const QuintupletParams& params, double delta);

/// One driven transition: N = d, P = d^2 - o1^2. Pointwise equal to the
/// quartuplet with o2 = m1 = m2 = 0.
double spectrum_doublet(double o1, double gamma, double g, double delta);

/// Loop of three fields at vanishing sine of the loop phase:
/// N = d^2 - m1^2, P = d^3 - (o1^2 + m1^2 + m2^2) d. Pointwise equal to the
/// quintuplet with o2 = m3 = 0.
double spectrum_triplet(double o1, double m1, double m2, double gamma,
                        double g, double delta);

/// Detunings where the quartuplet spectrum vanishes identically:
/// {-sqrt(m1^2+m2^2), 0, +sqrt(m1^2+m2^2)}, coincident values collapsed.
std::vector<double> dark_lines(const QuartupletParams& params);

/// Quintuplet dark lines, the four real roots of N: +-sqrt((A -+ sqrt(A^2 -
/// 4B))/2), sorted ascending, coincident values collapsed. Throws
/// DegenerateDarkLines if A^2 < 4B (impossible for real magnitudes, kept as
/// a guard).
std::vector<double> dark_lines(const QuintupletParams& params);

/// Dispatch on the recognized topology of `graph`; quartuplet and
/// quintuplet only, otherwise UnsupportedTopology.
std::vector<double> dark_lines(const LinkageGraph& graph);

/// Common height of fully resolved spectral components, 4 g^2 / gamma^2.
double peak_height_bound(double gamma, double g);

/// Extract closed-form parameters from a graph that match_topology
/// recognizes as the corresponding shape; UnsupportedTopology otherwise.
QuartupletParams quartuplet_params(const LinkageGraph& graph);
QuintupletParams quintuplet_params(const LinkageGraph& graph);

}  // namespace atspec
