#pragma once

#include <string>
#include <vector>

#include "atspec/model.hpp"

namespace atspec {

/// Parse a .linkage document into a validated graph.
///
/// Grammar, one statement per line, `#` starts a comment:
///   gamma <float>
///   state <label> [excited|vacuum]
///   couple <a> <b> rabi <float> [phase <float>]
///   init <label>
/// Labels are ASCII identifiers [a-zA-Z][a-zA-Z0-9_]*, case sensitive, and
/// must be declared before use. Floats are decimal or scientific notation,
/// no expressions. `gamma` defaults to 1 and `init` to the excited state.
///
/// Throws SyntaxError for malformed statements and SemanticError for
/// invariant violations; both carry the 1-based line and column.
LinkageGraph parse(const std::string& source);

/// Render a valid graph back to .linkage text. Floats use the shortest
/// decimal representation that round-trips, so parse(serialize(g)) == g.
std::string serialize(const LinkageGraph& graph);

/// Build one of the named linkage patterns:
///   doublet     1 coupling   e-g1
///   triplet     3 couplings  e-g1, g1-g2, e-g2
///   quartuplet  4 couplings  e-g1, e-g2, g1-g3, g3-g2
///   quintuplet  5 couplings  e-g1, e-g2, g1-g3, g3-g2, g2-g4
///   sextuplet   7 couplings  e-g1, e-g2, g1-g3, g3-g2, g3-g4, g4-g5, g5-g6
/// `rabi_values` follow the coupling order above (counts 1, 3, 4, 5, 7).
/// `phase` is the observable loop phase; it is stored on the first coupling,
/// offset by pi/2 for the triplet and quartuplet whose closed forms use the
/// sine of the loop phase. The doublet has no loop, so the phase is a gauge
/// choice recorded verbatim. The vacuum target is named "g".
/// Throws UnknownPreset and ArityMismatch.
LinkageGraph preset(const std::string& name,
                    const std::vector<double>& rabi_values,
                    double phase = 0.0);

/// Shortest decimal representation of `value` that parses back to the same
/// double. Shared by serialize() and the CSV writer.
std::string format_shortest(double value);

}  // namespace atspec
