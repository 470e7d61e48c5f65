#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "oam/circuit.hpp"

namespace oam {

// Sparse forward simulation: folds apply() over the element list. The input
// may only populate source ports.
PureState simulate(const Circuit& circuit, const PureState& input);

// Dense transfer matrix, built element by element over the reachable mode
// set with full (non-sparse) per-element matrices. This is the ground-truth
// oracle the rest of the project is checked against.
struct TransferMatrix {
  Eigen::MatrixXcd m;  // rows: output_basis, cols: input_basis
  std::vector<Mode> input_basis;
  std::vector<Mode> output_basis;

  Eigen::Index row_of(const Mode& mode) const;  // -1 if absent
  Eigen::Index col_of(const Mode& mode) const;

  // Dense application of the oracle matrix to an input state.
  PureState propagate(const PureState& input) const;
};

TransferMatrix transfer_matrix(const Circuit& circuit,
                               const std::vector<Mode>& input_basis);

// Effective bra per detector: the conjugated transfer-matrix row of the one
// label present at the detector's port, expressed over the input basis.
// Detectors whose port carries no amplitude map to an empty state. Throws if
// a detector port carries more than one label row (the projector is then not
// rank one; use detector_rows).
std::map<std::string, PureState> detector_projectors(
    const Circuit& circuit, const std::vector<Mode>& input_basis);

// All nonzero label rows per detector, for bucket detectors.
std::map<std::string, std::vector<std::pair<Label, PureState>>> detector_rows(
    const Circuit& circuit, const std::vector<Mode>& input_basis);

// max |M^H M - I|; 0 for lossless circuits.
double check_isometry(const Circuit& circuit, const std::vector<Mode>& basis);

// Convenience: basis modes on one source port for a list of labels.
std::vector<Mode> source_modes(const PathId& port, const std::vector<Label>& labels);

// Restriction of a state to one path.
PureState port_state(const PureState& state, const PathId& port);

// Restriction to one path with the path erased (amplitudes keyed by label
// on a common placeholder path), for comparing states across ports.
PureState label_vector(const PureState& state, const PathId& port);

}  // namespace oam
