#pragma once

// Shared helpers for the test suites and the acceptance runner: decay-share
// extraction from the characteristic polynomial, worst-gap scans between two
// spectrum routes, and small numeric utilities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "atspec/dressed.hpp"

namespace testsupport {

// Weak-decay component width route. The characteristic polynomial splits as
// D = P - i (gamma/2) Q with P and Q real; at a real root E of P the dressed
// component carries the excited-state weight Q(E)/P'(E), and its width is
// gamma times that share. The shares sum to exactly 1 by the residue
// identity, which makes this the route behind every quoted per-component
// width fraction. Returned sorted by root position.
struct ComponentShare {
  double position = 0.0;
  double share = 0.0;
};

inline std::vector<ComponentShare> decay_shares(const atspec::CharPoly& d,
                                                double gamma) {
  std::vector<double> p;
  std::vector<double> q;
  for (const auto& c : d.coefficients) {
    p.push_back(c.real());
    q.push_back(-2.0 / gamma * c.imag());
  }
  atspec::CharPoly p_real;
  for (double v : p) {
    p_real.coefficients.emplace_back(v, 0.0);
  }
  std::vector<ComponentShare> out;
  for (const auto& root : atspec::find_roots(p_real)) {
    const double e = root.real();
    double qv = 0.0;
    double pw = 1.0;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
      qv += q[k] * pw;
      pw *= e;
    }
    double dp = 0.0;
    pw = 1.0;
    for (std::size_t k = 1; k < p.size(); ++k) {
      dp += static_cast<double>(k) * p[k] * pw;
      pw *= e;
    }
    out.push_back({e, qv / dp});
  }
  std::sort(out.begin(), out.end(),
            [](const ComponentShare& a, const ComponentShare& b) {
              return a.position < b.position;
            });
  return out;
}

// Worst relative gap between two spectrum routes over a uniform grid.
// Points within `exclusion` of a listed zero are compared absolutely and
// reported through near_zero_abs instead; relative error is meaningless at
// the bottom of a dark line.
inline double max_rel_gap(const std::function<double(double)>& route_a,
                          const std::function<double(double)>& route_b,
                          double dmin, double dmax, int points,
                          const std::vector<double>& zeros,
                          double* near_zero_abs = nullptr,
                          double exclusion = 1e-6) {
  double worst_rel = 0.0;
  double worst_abs = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d =
        dmin + (dmax - dmin) * static_cast<double>(i) /
                   static_cast<double>(points - 1);
    bool near = false;
    for (double z : zeros) {
      near = near || std::abs(d - z) < exclusion;
    }
    const double a = route_a(d);
    const double b = route_b(d);
    if (near) {
      worst_abs = std::max(worst_abs, std::abs(a - b));
      continue;
    }
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0) {
      worst_rel = std::max(worst_rel, std::abs(a - b) / scale);
    }
  }
  if (near_zero_abs != nullptr) {
    *near_zero_abs = worst_abs;
  }
  return worst_rel;
}

}  // namespace testsupport
