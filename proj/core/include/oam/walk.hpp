#pragma once

#include <map>
#include <vector>

#include "oam/builders.hpp"

namespace oam {

// One coherent stage of the alternating L/D walk on a single parity chain.
//
// The chain has `sites` OAM values and sites-1 bonds between neighbors; each
// bond carries the C/D port pair of the interferometer that couples the two
// sites (the coin role). A stage is three splitter layers derived from the
// C/D tree geometry:
//   expansion     (symmetric 50/50)  (c,d) at each bond -> arms to both sites
//   site mixing   (hadamard 50/50)   the two arms meeting at a site
//   recombination (hadamard 50/50)   arms back into (c,d) at each bond
// Edge sites reflect their single arm back. The expansion layer uses the
// symmetric convention: with all three layers hadamard the chain is caged
// (two consecutive hops in the same direction cancel exactly) and nothing
// propagates.
struct WalkStage {
  Circuit circuit;
  int sites = 0;
  // Bond b (0-based, between sites b and b+1) has input ports in_c(b)/in_d(b)
  // and output ports out_c(b)/out_d(b); position coordinate 2b+1.
  PathId in_c(int bond) const;
  PathId in_d(int bond) const;
  PathId out_c(int bond) const;
  PathId out_d(int bond) const;
  int bonds() const { return sites - 1; }
};

WalkStage build_walk_stage(int sites);

// Stage sized to one parity chain of a sequence window.
WalkStage build_walk_stage(const SequenceSpec& seq, IndexParity parity);

// Amplitudes over the stage's input ports, one complex pair per bond.
struct WalkState {
  PureState state;
  int sites = 0;
  int step = 0;
};

// The state after injecting the eigenstate of one site through the site and
// recombination layers: an interior site spreads 1/4 of the probability onto
// each of the four C/D modes around it, matching the C/D tree.
WalkState walk_start(const WalkStage& stage, int site);

// One coherent stage application; no measurement.
WalkState walk_step(const WalkState& state, const WalkStage& stage);

struct WalkRun {
  // Position (node coordinate 2b+1) -> probability, one map per step,
  // starting at step 1 (= the injection).
  std::vector<std::map<int, double>> per_step;
  std::vector<double> variance;
};

// measure_each = true: the walker's node is measured after every stage, so
// the distribution evolves classically with the stage's transition
// probabilities. Otherwise the amplitudes evolve coherently and positions are
// read out at each step without collapsing.
WalkRun run_walk(const WalkStage& stage, int start_site, int steps, bool measure_each);

// Independent classical oracle: the lazy +-1 reflecting random walk on the
// bond chain (move probability 1/4 each way, stay 1/2), which is what
// alternating two-outcome L and D measurements produce per stage. Returns the
// variance after each step starting from the injection distribution.
std::vector<double> classical_walk_variance(int sites, int start_site, int steps);

}  // namespace oam
