#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "oam/engine.hpp"
#include "oam/netlist.hpp"
#include "oam/sequence.hpp"

namespace oam {

// Every builder checks its own circuit against the dense oracle before
// returning: the achieved detector bras must match the stated targets up to
// one global phase per detector. A failed check is a BuildError.
struct DetectorCheck {
  std::string detector;
  double deviation = 0;
};

struct BuilderReport {
  double max_deviation = 0;
  std::vector<DetectorCheck> checks;
};

// |achieved - e^{i theta} expected|_inf with theta chosen to align the global
// phase. Unlike phase_aligned_deviation this does not normalize, so POVM
// weights are compared too.
double phase_aligned_distance(const PureState& achieved, const PureState& expected);

BuilderReport verify_detector_bras(const Circuit& circuit,
                                   const std::vector<Mode>& input_basis,
                                   const std::map<std::string, PureState>& expected,
                                   double tol);

// ---------------------------------------------------------------------------
// Polarization analogs (the two-detector and four-detector interferometers).

struct PolInterferometer {
  Circuit circuit;
  PathId source;
  // Detectors: "C", "D".
};
PolInterferometer build_pol_interferometer();

struct PolPairInterferometer {
  Circuit circuit;
  PathId source;
  // Detectors: "C_p", "D_p" (plus-diagonal arm), "C_m", "D_m" (minus-diagonal).
};
PolPairInterferometer build_pol_pair_interferometer();

// ---------------------------------------------------------------------------
// C/D detection tree over one index-parity chain of a sequence window.

enum class IndexParity { even, odd };

struct CdTree {
  Circuit circuit;
  PathId source;
  SequenceSpec seq;
  std::vector<int> chain;            // sequence indices on this parity chain
  std::vector<int> interferometers;  // k values with detectors C_k / D_k
  std::map<std::string, PureState> expected_bras;
  BuilderReport verification;
};

// Sorter fans the chain values into spokes; each spoke is shifted to zero
// OAM and 50/50-split; adjacent spokes (index distance 2) meet at a final
// splitter with detectors C_k (sum port) and D_k (difference port). Boundary
// spokes terminate their unpaired branch on auxiliary detectors E_k.
CdTree build_cd_tree(const SequenceSpec& seq, IndexParity parity);

// ---------------------------------------------------------------------------
// General superposition generation/detection tree.

struct SuperpositionTarget {
  std::vector<Complex> coeffs;     // a_1..a_n
  std::vector<long long> values;   // the OAM set {x_1..x_V}, 1-based
  int anchor = 0;                  // m: coefficient a_j attaches to x_{m-j}

  // Convenience: coefficient j attaches to values[j] as given.
  static SuperpositionTarget from_list(std::vector<Complex> coeffs,
                                       std::vector<long long> values);

  std::vector<long long> selected_values() const;  // x_{m-1} .. x_{m-n}
  void validate() const;
};

struct Sgdt {
  Circuit circuit;
  PathId source;
  SuperpositionTarget target;
  std::string c_detector;                  // "C"
  std::vector<std::string> d_detectors;    // cascade complement ports
  PureState target_bra;                    // exact expected bra at C
  BuilderReport verification;
};

// Left-fold combiner cascade: line j carries attenuation |a_j|/a_max and
// phase arg(a_j); the per-stage splitting ratios equalize the line weights so
// the C-detector bra is proportional to sum_j conj(a_j) <x_{m-j}|.
Sgdt build_sgdt(const SuperpositionTarget& target);

// ---------------------------------------------------------------------------
// Tribonacci detection tree: every spoke interferes with its two neighbors.

struct TribonacciTree {
  Circuit circuit;
  PathId source;
  SequenceSpec seq;
  std::vector<int> chain;
  std::vector<int> groups;  // k values with detectors C_k / D_k
  std::map<std::string, PureState> expected_bras;
  BuilderReport verification;
};

// Detector bras: C_k ~ <l_k| + <l_{k-1}| + <l_{k-2}|,
//                D_k ~ <l_k| - <l_{k-1}| - <l_{k-2}|.
TribonacciTree build_tribonacci_tree(const SequenceSpec& seq);

// ---------------------------------------------------------------------------
// Four-dimensional mutually unbiased basis analyzers.

struct Mub4 {
  Circuit l_circuit;  // sorter + detectors L_1..L_4
  Circuit m_circuit;  // Hadamard-mesh analyzer, detectors M_1..M_4
  PathId l_source, m_source;
  std::array<long long, 4> values;
  std::map<std::string, PureState> l_bras, m_bras;
  BuilderReport l_verification, m_verification;
};

Mub4 build_mub4(const std::array<long long, 4>& values);

// ---------------------------------------------------------------------------
// Recursive state generator.

struct RsgCell {
  Circuit circuit;
  PathId in1, in2;
  PathId out1, out2, out3;  // out3 carries the normalized-sum state
};

// Unit cell: both inputs 50/50-split; the inner branches meet at a 50/50
// combiner whose sum port is the new output line. The combiner's second port
// carries away exactly the 1/sqrt2 of amplitude that makes the three outputs
// equal.
RsgCell build_rsg_cell();

struct Rsg {
  Circuit circuit;
  PathId source;
  SequenceSpec seq;
  int cells = 0;
  bool equalized = true;
  long long x0 = 0, x1 = 0;          // the two injected OAM values
  std::vector<PathId> outputs;       // p + 2 ports, recurrence order
  PureState canonical_input() const; // (|x0> + |x1>)/sqrt2 on the source
};

// p nested cells; outputs obey |x_k> ~ c1 |x_{k-1}> + c2 |x_{k-2}| with the
// two-term recurrence taken from seq.coeffs. With equalize, pass-through
// lines are attenuated so all final outputs have equal magnitude.
Rsg build_rsg(int p, const SequenceSpec& seq, bool equalize = true);

// ---------------------------------------------------------------------------
// Synthesis orientation of the SGDT: no shifters, no detectors.

struct Synthesizer {
  Circuit circuit;
  PathId source;
  SuperpositionTarget target;
  PathId c_out;                 // carries sum_j a_j |x_{m-j}> for uniform input
  std::vector<PathId> d_outs;   // cascade complement ports
  PureState target_ket;         // exact expected ket at c_out
  PureState canonical_input() const;  // uniform over the selected values
};

Synthesizer build_synthesizer(const SuperpositionTarget& target);

// ---------------------------------------------------------------------------
// Combined two-chain C/D analyzer over consecutive indices (both parities fed
// by one sorter), as used by the key-distribution receiver.

struct DAnalyzer {
  Circuit circuit;
  PathId source;
  SequenceSpec seq;
  std::vector<int> indices;  // all indices covered by the sorter
  std::map<std::string, PureState> expected_bras;
  BuilderReport verification;
};

DAnalyzer build_d_analyzer(const SequenceSpec& seq, const std::vector<int>& indices);

// Plain sorter + one detector per index ("F_<k>").
struct LAnalyzer {
  Circuit circuit;
  PathId source;
  SequenceSpec seq;
  std::vector<int> indices;
};

LAnalyzer build_l_analyzer(const SequenceSpec& seq, const std::vector<int>& indices);

}  // namespace oam
