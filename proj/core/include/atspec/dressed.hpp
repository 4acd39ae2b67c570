#pragma once

#include <cstddef>
#include <vector>

#include "atspec/closed_form.hpp"
#include "atspec/model.hpp"

namespace atspec {

/// Complex polynomial, ascending order: coefficients[k] multiplies delta^k.
struct CharPoly {
  std::vector<cplx> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Pole form of the asymptotic emission amplitude,
///   amplitude(delta) = sum_i residues[i] / (delta - roots[i]),
/// where the roots are the dressed eigenvalues (all in the upper half
/// plane for gamma > 0; their imaginary parts are half the component
/// linewidths and sum to gamma/2).
struct DressedDecomposition {
  std::vector<cplx> roots;
  std::vector<cplx> residues;

  std::size_t count() const { return roots.size(); }
};

/// Residue factor combinations built from root differences.
///
/// For five roots, global_factor is the full pairwise difference product
/// (i<j order) and per_root[i] the same product excluding root i; the
/// numeric residues are proportional to numerator(root_i) * per_root[i] /
/// global_factor with an alternating sign, which the tests check for
/// constancy. For four roots, global_factor follows a conventional form
/// whose "(1 + root)" term mixes dimensions, so it is exposed for
/// inspection and never used in computation; per_root reduces to the
/// negated exclude-one product.
struct DifferenceFactors {
  cplx global_factor;
  std::vector<cplx> per_root;
};

/// Characteristic polynomial D(delta) = P(delta) - i (gamma/2) N(delta)/g
/// of the quartuplet (degree 4) or quintuplet (degree 5), with P and N the
/// polynomials of the corresponding closed form.
CharPoly char_poly(const QuartupletParams& params);
CharPoly char_poly(const QuintupletParams& params);

/// Characteristic polynomial of -i A for a compiled system (the same
/// polynomial as the parameter overloads when the graph matches a preset),
/// by the Faddeev-LeVerrier recurrence.
CharPoly char_poly(const CoupledSystem& system);

/// All complex roots of `poly`, sorted by (real, imaginary).
///
/// Exact zero roots are deflated first (low-order coefficients equal to
/// complex zero), then the remaining roots are refined by simultaneous
/// Aberth iteration from a circle of initial guesses until every residual
/// is at most 1e-12 times the largest monic coefficient magnitude.
/// Throws InvalidParams for an empty, constant, or non-finite polynomial
/// and NoConvergence if the iteration cap is reached.
std::vector<cplx> find_roots(const CharPoly& poly);

/// Root-difference factor products for 4 or 5 roots (see DifferenceFactors).
/// Throws DegenerateRoots if any two roots are closer than 1e-8 and
/// InvalidParams for other root counts.
DifferenceFactors difference_factors(const std::vector<cplx>& roots);

/// Partial-fraction residues of numerator/denominator at the denominator
/// roots: r_i = N(root_i) / D'(root_i). Requires deg N < deg D and
/// pairwise distinct roots (tolerance 1e-8, else DegenerateRoots).
DressedDecomposition residues(const CharPoly& numerator,
                              const CharPoly& denominator);

/// Residue decomposition of the quartuplet or quintuplet amplitude, with
/// N(delta) = g * (numerator polynomial of the closed form).
DressedDecomposition residues_numeric(const QuartupletParams& params);
DressedDecomposition residues_numeric(const QuintupletParams& params);

/// Coherent pole sum |sum_i r_i / (delta - root_i)|^2. Expanding the square
/// gives one absolute-squared term per component plus n(n-1) interference
/// cross terms; the cross terms cancel the rest exactly at dark lines.
double spectrum_decomposed(const DressedDecomposition& decomposition,
                           double delta);

}  // namespace atspec
