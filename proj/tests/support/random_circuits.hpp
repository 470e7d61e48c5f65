#pragma once

// Seeded random circuit generator for the oracle-equivalence fuzz: valid DAG
// circuits over a handful of wires and small OAM labels, plus matching random
// sparse input states.

#include <cmath>
#include <vector>

#include "oam/circuit.hpp"
#include "oam/rng.hpp"

namespace oam::testing {

struct RandomCircuit {
  Circuit circuit;
  std::vector<PathId> sources;
  bool lossless = true;  // no attenuator
};

inline Mat2 random_unitary(SplitMix64& rng) {
  const double theta = rng.next_double() * 3.14159265358979;
  const double alpha = rng.next_double() * 6.28318530717959;
  const double beta = rng.next_double() * 6.28318530717959;
  const double c = std::cos(theta), s = std::sin(theta);
  return Mat2{std::polar(c, alpha), std::polar(s, beta),
              -std::polar(s, -beta), std::polar(c, -alpha)};
}

inline RandomCircuit random_circuit(std::uint64_t seed, int max_elements = 20) {
  SplitMix64 rng = stream_for(seed, 17);
  RandomCircuit out;
  Circuit& c = out.circuit;
  int next_wire = 0;
  auto fresh = [&] { return "w" + std::to_string(next_wire++); };

  const int n_sources = 1 + static_cast<int>(rng.next_below(3));
  std::vector<PathId> live;
  for (int i = 0; i < n_sources; ++i) {
    const PathId p = fresh();
    c.add_source(p);
    out.sources.push_back(p);
    live.push_back(p);
  }

  const int n_elements = 1 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(max_elements)));
  const int label_span = 2;  // labels in [-2, 2] keep the mode count small
  for (int e = 0; e < n_elements; ++e) {
    const int kind = static_cast<int>(rng.next_below(6));
    const PathId a = live[rng.next_below(live.size())];
    switch (kind) {
      case 0: {  // beam splitter
        if (live.size() < 2) break;
        PathId b = live[rng.next_below(live.size())];
        if (a == b) break;
        const PathId oc = fresh(), od = fresh();
        const double ratio = 0.05 + 0.9 * rng.next_double();
        const BsConvention conv = rng.next_below(2) == 0 ? BsConvention::hadamard
                                                         : BsConvention::symmetric;
        c.add_element(BeamSplitter{a, b, oc, od, ratio, conv});
        std::erase(live, a);
        std::erase(live, b);
        live.push_back(oc);
        live.push_back(od);
        break;
      }
      case 1:
        c.add_element(PhaseShift{a, rng.next_double() * 6.28318530717959});
        break;
      case 2:
        c.add_element(Attenuator{a, rng.next_double()});
        out.lossless = false;
        break;
      case 3: {
        const int delta = static_cast<int>(rng.next_below(5)) - 2;
        c.add_element(OamShift{a, delta});
        break;
      }
      case 4: {  // sorter over a random label subset
        std::map<Label, PathId> table;
        std::vector<PathId> outs;
        for (int l = -label_span; l <= label_span; ++l) {
          if (rng.next_below(2) == 0) continue;
          const PathId p = fresh();
          table.emplace(Label::oam(l), p);
          outs.push_back(p);
        }
        const PathId rej = fresh();
        c.add_element(Sorter{a, std::move(table), rej});
        std::erase(live, a);
        for (const auto& p : outs) live.push_back(p);
        live.push_back(rej);
        break;
      }
      default: {
        const int l0 = static_cast<int>(rng.next_below(2 * label_span + 1)) - label_span;
        int l1 = static_cast<int>(rng.next_below(2 * label_span + 1)) - label_span;
        if (l0 == l1) l1 = l0 == label_span ? l0 - 1 : l0 + 1;
        c.add_element(LabelUnitary{a, Label::oam(l0), Label::oam(l1),
                                   random_unitary(rng)});
        break;
      }
    }
  }
  // Detect a random subset of the surviving wires.
  int det = 0;
  for (const PathId& p : c.terminal_ports()) {
    if (rng.next_below(3) != 0) c.add_detector("det" + std::to_string(det++), p);
  }
  return out;
}

// Random sparse input over the circuit's sources with small OAM labels,
// capped at 12 modes.
inline PureState random_input(const RandomCircuit& rc, std::uint64_t seed) {
  SplitMix64 rng = stream_for(seed, 23);
  PureState s;
  for (const PathId& p : rc.sources) {
    for (int l = -2; l <= 2; ++l) {
      if (rng.next_below(2) == 0) continue;
      if (s.size() >= 12) break;
      s.add(Mode{p, Label::oam(l)},
            Complex(rng.next_double() - 0.5, rng.next_double() - 0.5));
    }
  }
  if (s.empty()) s.add(Mode{rc.sources.front(), Label::oam(0)}, Complex(1, 0));
  return s.normalized();
}

}  // namespace oam::testing
