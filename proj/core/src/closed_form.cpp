#include "atspec/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace atspec {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double value = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) {
    value = value * x + c[j];
  }
  return value;
}

double binom(std::size_t j, std::size_t k) {
  double value = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    value = value * static_cast<double>(j - i) / static_cast<double>(i + 1);
  }
  return value;
}

/// First nonzero Taylor coefficient of the polynomial around x0, together
/// with its index. Exact floating-point zero tests are intended: this runs
/// only when the evaluated spectrum hit 0/0, which requires the low-order
/// coefficients to cancel exactly.
std::pair<int, double> vanishing_order(const std::vector<double>& c,
                                       double x0) {
  for (std::size_t k = 0; k < c.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = c.size(); j-- > k;) {
      s = s * x0 + c[j] * binom(j, k);
    }
    if (s != 0.0) {
      return {static_cast<int>(k), s};
    }
  }
  // The closed forms are monic, so some coefficient is always nonzero.
  throw NonFinite("vanishing order requested for the zero polynomial");
}

/// Evaluate S = g^2 N^2 / (P^2 + (gamma^2/4) N^2) with removable 0/0 points
/// resolved by comparing the vanishing orders q of N and p of P:
/// q > p gives 0, q < p gives the component height 4g^2/gamma^2, and q == p
/// gives g^2 / (r^2 + gamma^2/4) with r the ratio of leading coefficients.
double rational_spectrum(const std::vector<double>& numerator_poly,
                         const std::vector<double>& characteristic_poly,
                         double gamma, double g, double delta) {
  const double n = poly_eval(numerator_poly, delta);
  const double p = poly_eval(characteristic_poly, delta);
  const double num = g * g * n * n;
  const double den = p * p + 0.25 * gamma * gamma * n * n;
  if (den != 0.0) {
    return num / den;
  }
  if (num != 0.0) {
    // Cannot happen for gamma > 0, where den >= (gamma^2/4) n^2 > 0
    // whenever n != 0; guarded so a slip cannot return inf.
    throw NonFinite("spectrum denominator vanished with nonzero numerator");
  }
  const auto [q, a] = vanishing_order(numerator_poly, delta);
  const auto [po, b] = vanishing_order(characteristic_poly, delta);
  if (q > po) {
    return 0.0;
  }
  if (q < po) {
    return 4.0 * g * g / (gamma * gamma);
  }
  const double ratio = b / a;
  return g * g / (ratio * ratio + 0.25 * gamma * gamma);
}

void check_common(double gamma, double g, double phase) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw InvalidParams("gamma must be a positive finite number");
  }
  if (!std::isfinite(g) || g < 0.0) {
    throw InvalidParams("coupling constant must be finite and nonnegative");
  }
  if (!std::isfinite(phase)) {
    throw InvalidParams("phase must be finite");
  }
}

void check_magnitudes(std::initializer_list<double> magnitudes) {
  for (const double m : magnitudes) {
    if (!std::isfinite(m) || m < 0.0) {
      throw InvalidParams("Rabi magnitudes must be finite and nonnegative");
    }
  }
}

std::vector<double> quart_numerator(const QuartupletParams& p) {
  const double M = p.m1 * p.m1 + p.m2 * p.m2;
  return {0.0, -M, 0.0, 1.0};
}

std::vector<double> quart_characteristic(const QuartupletParams& p) {
  const double M = p.m1 * p.m1 + p.m2 * p.m2;
  const double S = p.o1 * p.o1 + p.o2 * p.o2 + M;
  const double K = p.o1 * p.o1 * p.m2 * p.m2 + p.o2 * p.o2 * p.m1 * p.m1 +
                   2.0 * p.o1 * p.o2 * p.m1 * p.m2 * std::sin(p.phase);
  return {K, 0.0, -S, 0.0, 1.0};
}

std::vector<double> quint_numerator(const QuintupletParams& p) {
  const double A = p.m1 * p.m1 + p.m2 * p.m2 + p.m3 * p.m3;
  const double B = p.m1 * p.m1 * p.m3 * p.m3;
  return {B, 0.0, -A, 0.0, 1.0};
}

std::vector<double> quint_characteristic(const QuintupletParams& p) {
  const double A = p.m1 * p.m1 + p.m2 * p.m2 + p.m3 * p.m3;
  const double S = p.o1 * p.o1 + p.o2 * p.o2 + A;
  const double C = p.o1 * p.o1 * p.m2 * p.m2 + p.o1 * p.o1 * p.m3 * p.m3 +
                   p.o2 * p.o2 * p.m1 * p.m1 + p.m1 * p.m1 * p.m3 * p.m3 -
                   2.0 * p.o1 * p.o2 * p.m1 * p.m2 * std::cos(p.phase);
  return {0.0, C, 0.0, -S, 0.0, 1.0};
}

}  // namespace

void validate(const QuartupletParams& params) {
  check_magnitudes({params.o1, params.o2, params.m1, params.m2});
  check_common(params.gamma, params.g, params.phase);
}

void validate(const QuintupletParams& params) {
  check_magnitudes({params.o1, params.o2, params.m1, params.m2, params.m3});
  check_common(params.gamma, params.g, params.phase);
}

double spectrum_quartuplet(const QuartupletParams& params, double delta) {
  validate(params);
  return rational_spectrum(quart_numerator(params),
                           quart_characteristic(params), params.gamma,
                           params.g, delta);
}

double spectrum_quintuplet(const QuintupletParams& params, double delta) {
  validate(params);
  return rational_spectrum(quint_numerator(params),
                           quint_characteristic(params), params.gamma,
                           params.g, delta);
}

double spectrum_doublet(double o1, double gamma, double g, double delta) {
  check_magnitudes({o1});
  check_common(gamma, g, 0.0);
  return rational_spectrum({0.0, 1.0}, {-o1 * o1, 0.0, 1.0}, gamma, g, delta);
}

double spectrum_triplet(double o1, double m1, double m2, double gamma,
                        double g, double delta) {
  check_magnitudes({o1, m1, m2});
  check_common(gamma, g, 0.0);
  const double S = o1 * o1 + m1 * m1 + m2 * m2;
  return rational_spectrum({-m1 * m1, 0.0, 1.0}, {0.0, -S, 0.0, 1.0}, gamma,
                           g, delta);
}

std::vector<double> dark_lines(const QuartupletParams& params) {
  validate(params);
  const double root = std::sqrt(params.m1 * params.m1 + params.m2 * params.m2);
  std::vector<double> lines = {-root, 0.0, root};
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

std::vector<double> dark_lines(const QuintupletParams& params) {
  validate(params);
  const double A = params.m1 * params.m1 + params.m2 * params.m2 +
                   params.m3 * params.m3;
  const double B = params.m1 * params.m1 * params.m3 * params.m3;
  const double disc = A * A - 4.0 * B;
  if (disc < 0.0) {
    // A^2 >= 4B always holds for real magnitudes (it equals
    // (m1^2 - m3^2)^2 plus nonnegative cross terms); guard anyway.
    throw DegenerateDarkLines("dark-line discriminant is negative");
  }
  const double sq = std::sqrt(disc);
  const double inner = std::sqrt((A - sq) / 2.0);
  const double outer = std::sqrt((A + sq) / 2.0);
  std::vector<double> lines = {-outer, -inner, inner, outer};
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

std::vector<double> dark_lines(const LinkageGraph& graph) {
  const auto match = match_topology(graph);
  if (match && match->topology == PresetTopology::Quartuplet) {
    return dark_lines(quartuplet_params(graph));
  }
  if (match && match->topology == PresetTopology::Quintuplet) {
    return dark_lines(quintuplet_params(graph));
  }
  throw UnsupportedTopology(
      "dark-line formulas cover quartuplet and quintuplet linkages only");
}

double peak_height_bound(double gamma, double g) {
  check_common(gamma, g, 0.0);
  return 4.0 * g * g / (gamma * gamma);
}

QuartupletParams quartuplet_params(const LinkageGraph& graph) {
  const auto match = match_topology(graph);
  if (!match || match->topology != PresetTopology::Quartuplet) {
    throw UnsupportedTopology("graph is not a quartuplet linkage");
  }
  QuartupletParams params;
  params.o1 = match->rabi[0];
  params.o2 = match->rabi[1];
  params.m1 = match->rabi[2];
  params.m2 = match->rabi[3];
  params.phase = match->phase;
  params.gamma = graph.gamma;
  return params;
}

QuintupletParams quintuplet_params(const LinkageGraph& graph) {
  const auto match = match_topology(graph);
  if (!match || match->topology != PresetTopology::Quintuplet) {
    throw UnsupportedTopology("graph is not a quintuplet linkage");
  }
  QuintupletParams params;
  params.o1 = match->rabi[0];
  params.o2 = match->rabi[1];
  params.m1 = match->rabi[2];
  params.m2 = match->rabi[3];
  params.m3 = match->rabi[4];
  params.phase = match->phase;
  params.gamma = graph.gamma;
  return params;
}

}  // namespace atspec
