#pragma once

#include <map>
#include <variant>
#include <vector>

#include "oam/state.hpp"

namespace oam {

// Beam splitter amplitude conventions at ratio r, s = sqrt(1 - r^2):
//   hadamard : (a, b) -> (r a + s b,  s a - r b)
//   symmetric: (a, b) -> (r a + i s b, i s a + r b)
// Both are unitary for r in (0, 1); r = 1/sqrt2 is the 50/50 splitter.
enum class BsConvention { hadamard, symmetric };

struct BeamSplitter {
  PathId in_a, in_b;
  PathId out_c, out_d;
  double ratio = 0.70710678118654752;
  BsConvention convention = BsConvention::hadamard;
  bool operator==(const BeamSplitter&) const = default;
};

struct PhaseShift {
  PathId port;
  double phi = 0;  // radians
  bool operator==(const PhaseShift&) const = default;
};

// Amplitude transmission t in [0, 1]; the lost probability is implicit.
struct Attenuator {
  PathId port;
  double t = 1;
  bool operator==(const Attenuator&) const = default;
};

// Spiral wave plate / hologram: l -> l + delta on one path.
struct OamShift {
  PathId port;
  int delta = 0;
  bool operator==(const OamShift&) const = default;
};

// Routes each listed label to its own output path; labels absent from the
// table go to the reject path. Labels are never altered.
struct Sorter {
  PathId in;
  std::map<Label, PathId> table;
  PathId reject;
  bool operator==(const Sorter&) const = default;
};

struct Mat2 {
  Complex m00, m01, m10, m11;
  bool is_unitary(double tol = 1e-12) const;
  bool operator==(const Mat2&) const = default;
};

// 2x2 unitary acting on two internal labels of one path (wave plates and
// friends). Labels outside the pair but of the same kind pass through.
struct LabelUnitary {
  PathId port;
  Label l0 = Label::h();
  Label l1 = Label::v();
  Mat2 u;
  bool operator==(const LabelUnitary&) const = default;
};

using Element =
    std::variant<BeamSplitter, PhaseShift, Attenuator, OamShift, Sorter, LabelUnitary>;

// Ports the element consumes (and, for in-place elements, also keeps).
std::vector<PathId> input_ports(const Element& e);
// Ports the element newly produces. In-place elements produce nothing new.
std::vector<PathId> output_ports(const Element& e);
bool is_in_place(const Element& e);

// Transforms the amplitudes on the element's ports; everything else is
// untouched. Throws SemanticError on a label-kind mismatch (an OAM element
// meeting polarization amplitude or vice versa).
PureState apply(const Element& e, const PureState& state);

enum class Diagonal { plus45, minus45 };

// Polarization rotation by +-45 degrees on (H, V):
//   plus45 : V -> (H+V)/sqrt2,  H -> (H-V)/sqrt2
//   minus45: V -> (V-H)/sqrt2,  H -> (H+V)/sqrt2
Element half_wave_plate(const PathId& port, Diagonal d);

}  // namespace oam
