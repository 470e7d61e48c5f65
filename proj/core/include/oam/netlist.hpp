#pragma once

#include <string>
#include <string_view>

#include "oam/circuit.hpp"

namespace oam {

// Line-oriented netlist grammar ('#' starts a comment, tokens are
// whitespace-separated):
//
//   source <port>
//   bs <hadamard|symmetric> <ratio> <inA> <inB> -> <outC> <outD>
//   phase <port> <radians>
//   atten <port> <t>
//   shift <port> <delta-integer>
//   sorter <in> reject <rejectPort> { <label>:<outPort> ... }
//   hwp <port> <plus45|minus45>
//   lunitary <port> <label1> <label2> <m00re> <m00im> <m01re> <m01im>
//            <m10re> <m10im> <m11re> <m11im>
//   detect <name> <port>
//
// Labels are decimal integers or the polarization tags H and V. Reals are
// decimal doubles. Canonical files are UTF-8 with LF line endings.
// File extension: ".onl".

// Throws ParseError (bad syntax) or SemanticError (grammar-valid text that
// violates circuit rules), both carrying line/column.
Circuit parse_netlist(std::string_view text);

// Canonical form: sources first (lexicographic), then elements in their
// topological order, then detectors sorted by name. Sorter tables are sorted
// by label. Reals are printed with 17 significant digits so that
// parse(emit(c)) == c exactly.
std::string emit_netlist(const Circuit& circuit);

}  // namespace oam
