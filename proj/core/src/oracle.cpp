#include "atspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace atspec {

namespace {

/// Partial-pivot row echelon solve of M x = rhs that tolerates a singular
/// but consistent system: a column without a usable pivot leaves its
/// unknown at zero (one valid member of the solution set), and any fully
/// eliminated row must carry a compatible right-hand side. Used at
/// detunings where decoupled dark components make i*delta an eigenvalue of
/// the ground block.
std::vector<cplx> solve_consistent(ComplexMatrix m, std::vector<cplx> rhs) {
  const std::size_t n = m.dim();
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
    }
    scale = std::max(scale, std::abs(rhs[i]));
  }
  const double pivot_tol = 1e-12 * scale;
  const double residual_tol = 1e-9 * scale;

  std::vector<int> pivot_row_of_col(n, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    double best_abs = std::abs(m(row, col));
    for (std::size_t r = row + 1; r < n; ++r) {
      const double a = std::abs(m(r, col));
      if (a > best_abs) {
        best = r;
        best_abs = a;
      }
    }
    if (best_abs <= pivot_tol) {
      continue;  // free column, unknown pinned to zero
    }
    if (best != row) {
      for (std::size_t cc = 0; cc < n; ++cc) {
        std::swap(m(row, cc), m(best, cc));
      }
      std::swap(rhs[row], rhs[best]);
    }
    pivot_row_of_col[col] = static_cast<int>(row);
    for (std::size_t r = row + 1; r < n; ++r) {
      if (m(r, col) == cplx(0.0, 0.0)) {
        continue;
      }
      const cplx factor = m(r, col) / m(row, col);
      m(r, col) = cplx(0.0, 0.0);
      for (std::size_t cc = col + 1; cc < n; ++cc) {
        m(r, cc) -= factor * m(row, cc);
      }
      rhs[r] -= factor * rhs[row];
    }
    ++row;
  }

  for (std::size_t r = row; r < n; ++r) {
    if (std::abs(rhs[r]) > residual_tol) {
      throw SingularSystem("linear system is singular and inconsistent");
    }
  }

  std::vector<cplx> x(n, cplx(0.0, 0.0));
  for (std::size_t col = n; col-- > 0;) {
    const int r = pivot_row_of_col[col];
    if (r < 0) {
      continue;
    }
    cplx sum = rhs[static_cast<std::size_t>(r)];
    for (std::size_t cc = col + 1; cc < n; ++cc) {
      sum -= m(static_cast<std::size_t>(r), cc) * x[cc];
    }
    x[col] = sum / m(static_cast<std::size_t>(r), col);
  }
  return x;
}

std::vector<cplx> matvec(const ComplexMatrix& a, const std::vector<cplx>& x) {
  const std::size_t n = a.dim();
  std::vector<cplx> y(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cplx sum(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      sum += a(i, j) * x[j];
    }
    y[i] = sum;
  }
  return y;
}

}  // namespace

double spectrum_linear_solve(const CoupledSystem& system, double delta) {
  const std::size_t n = system.matrix.dim();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = -system.matrix(i, j);
    }
    m(i, i) += cplx(0.0, delta);
  }
  const std::vector<cplx> x = solve_consistent(std::move(m), system.x0);
  return system.g * system.g * std::norm(x[0]);
}

TimeTrajectory integrate(const CoupledSystem& system, double horizon,
                         double step) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw InvalidStep("horizon must be a positive finite time");
  }
  if (!std::isfinite(step) || step <= 0.0) {
    throw InvalidStep("step must be a positive finite time");
  }
  if (step > horizon / 100.0) {
    throw InvalidStep("step must be at most horizon/100");
  }

  long long nsteps = std::max<long long>(100, std::llround(horizon / step));
  if (nsteps % 2 != 0) {
    ++nsteps;  // keep the sample count odd for Simpson quadrature
  }
  const double h = horizon / static_cast<double>(nsteps);
  const std::size_t n = system.matrix.dim();

  TimeTrajectory trajectory;
  trajectory.times.reserve(static_cast<std::size_t>(nsteps) + 1);
  trajectory.amplitudes.reserve(static_cast<std::size_t>(nsteps) + 1);

  std::vector<cplx> x = system.x0;
  trajectory.times.push_back(0.0);
  trajectory.amplitudes.push_back(x);

  std::vector<cplx> stage(n);
  for (long long k = 1; k <= nsteps; ++k) {
    const std::vector<cplx> k1 = matvec(system.matrix, x);
    for (std::size_t i = 0; i < n; ++i) {
      stage[i] = x[i] + 0.5 * h * k1[i];
    }
    const std::vector<cplx> k2 = matvec(system.matrix, stage);
    for (std::size_t i = 0; i < n; ++i) {
      stage[i] = x[i] + 0.5 * h * k2[i];
    }
    const std::vector<cplx> k3 = matvec(system.matrix, stage);
    for (std::size_t i = 0; i < n; ++i) {
      stage[i] = x[i] + h * k3[i];
    }
    const std::vector<cplx> k4 = matvec(system.matrix, stage);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    trajectory.times.push_back(static_cast<double>(k) * h);
    trajectory.amplitudes.push_back(x);
  }
  return trajectory;
}

double spectrum_from_trajectory(const TimeTrajectory& trajectory, double g,
                                double delta) {
  const std::size_t count = trajectory.times.size();
  if (count < 3 || count % 2 == 0) {
    throw InvalidParams(
        "trajectory must hold an odd sample count of at least 3");
  }
  const double h =
      (trajectory.times.back() - trajectory.times.front()) /
      static_cast<double>(count - 1);

  auto term = [&](std::size_t k) {
    const double t = trajectory.times[k];
    return std::exp(cplx(0.0, -delta * t)) * trajectory.amplitudes[k][0];
  };

  cplx integral = term(0) + term(count - 1);
  for (std::size_t k = 1; k + 1 < count; ++k) {
    integral += (k % 2 == 1 ? 4.0 : 2.0) * term(k);
  }
  integral *= h / 3.0;

  // amplitude = -i g * integral; only the magnitude matters here
  return g * g * std::norm(integral);
}

double spectrum_time_domain(const CoupledSystem& system, double delta,
                            double horizon, double step) {
  return spectrum_from_trajectory(integrate(system, horizon, step), system.g,
                                  delta);
}

}  // namespace atspec
