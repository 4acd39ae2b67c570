#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "atspec/errors.hpp"

namespace atspec {

using cplx = std::complex<double>;

/// One field-driven transition between two declared states.
///
/// `rabi` is the magnitude |Omega| in units of the decay rate; `phase` is the
/// Hamiltonian phase of the coupling in radians. At most one coupling in a
/// graph may carry a nonzero phase: a single closed loop admits a single
/// observable relative phase, and everything else is gauged away.
struct Coupling {
  std::string from;
  std::string to;
  double rabi = 0.0;
  double phase = 0.0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// A driven multi-level linkage: one decaying excited state, driven ground
/// states, and one vacuum target reachable only by spontaneous emission.
///
/// Invariants (enforced by compile()):
///  - `excited` and `vacuum_target` are declared, distinct states;
///  - the vacuum target appears in no coupling;
///  - no self-couplings, at most one coupling per unordered state pair;
///  - gamma > 0, all Rabi magnitudes >= 0, at most one nonzero phase;
///  - `initial` (default: the excited state) is a driven state.
struct LinkageGraph {
  std::vector<std::string> states;  ///< declaration order
  std::string excited;
  std::string vacuum_target;
  double gamma = 1.0;
  std::vector<Coupling> couplings;
  std::string initial;  ///< empty means "the excited state"

  friend bool operator==(const LinkageGraph&, const LinkageGraph&) = default;
};

/// Dense square complex matrix, row major. Dimensions here never exceed the
/// number of driven states (at most 7 for the shipped presets).
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::size_t dim() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

/// The compiled amplitude equations of motion dx/dt = A x.
///
/// Basis order: excited state first, then driven grounds in declaration
/// order; the vacuum target is not a matrix row (the continuum is handled per
/// method). A carries -i Omega e^{+i phase} on the (from, to) entry, the
/// conjugate on (to, from), and -gamma/2 added to the excited diagonal, so
/// Trace(A) = -gamma/2 and A is anti-Hermitian at gamma = 0.
struct CoupledSystem {
  std::vector<std::string> basis;
  ComplexMatrix matrix;
  std::vector<cplx> x0;
  double gamma = 1.0;
  double g = 1.0;  ///< vacuum coupling constant (raw normalization g = 1)
};

/// Spectrum computation method tags, used to label sampled series.
enum class Method { ClosedForm, Dressed, LinearSolve, TimeDomain };

std::string to_string(Method method);

/// A spectrum sampled on a strictly increasing detuning grid.
struct SpectrumSeries {
  std::vector<double> deltas;
  std::vector<double> values;
  Method method = Method::ClosedForm;
};

/// The named linkage patterns with closed forms or documented scans.
enum class PresetTopology { Doublet, Triplet, Quartuplet, Quintuplet, Sextuplet };

std::string to_string(PresetTopology topology);

/// Structural data recovered from a graph that matches a preset shape:
/// Rabi magnitudes in the documented preset coupling order, plus the loop
/// phase expressed in the convention of the matching closed form (zero for
/// the doublet, where no loop exists and the phase is unobservable).
struct PresetMatch {
  PresetTopology topology;
  std::vector<double> rabi;
  double phase = 0.0;
};

/// Validate `graph` and build the coupled amplitude system.
/// Throws InvalidGraph (message names the violated invariant) or
/// UnknownState (a coupling or the initial state references an undeclared
/// label).
CoupledSystem compile(const LinkageGraph& graph);

/// Match `graph` against the preset shapes by structure alone (adjacency,
/// not magnitudes). Returns std::nullopt when no shape matches. The graph
/// must be valid; validation errors propagate as from compile().
std::optional<PresetMatch> match_topology(const LinkageGraph& graph);

/// Effective Rabi scale of a recognized quartuplet or quintuplet:
/// sqrt(o2^2 + m1^2 + m2^2) and sqrt(o1^2 + o2^2 + m1^2 + m2^2 + m3^2)
/// respectively. Throws UnsupportedTopology for every other graph.
double effective_rabi(const LinkageGraph& graph);

}  // namespace atspec
