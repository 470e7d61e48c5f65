#include "oam/builders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace oam {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kVerifyTol = 1e-10;

class NamePool {
 public:
  PathId fresh(const std::string& prefix) {
    return prefix + std::to_string(n_++);
  }

 private:
  int n_ = 0;
};

// 50/50 split of one wire against vacuum: c-output keeps ratio r of the
// amplitude, d-output sqrt(1-r^2).
void split(Circuit& c, NamePool& pool, const PathId& in, const PathId& out_c,
           const PathId& out_d, double ratio = kInvSqrt2) {
  const PathId vac = pool.fresh("vac");
  c.add_source(vac);
  c.add_element(BeamSplitter{in, vac, out_c, out_d, ratio, BsConvention::hadamard});
}

// Splits one wire into k branches of equal amplitude 1/sqrt(k) via a peel
// chain of beam splitters.
std::vector<PathId> equal_fanout(Circuit& c, NamePool& pool, const PathId& in,
                                 int k, const std::string& prefix) {
  std::vector<PathId> branches;
  if (k == 1) {
    branches.push_back(in);
    return branches;
  }
  PathId rest = in;
  for (int i = 1; i < k; ++i) {
    const double remaining = static_cast<double>(k - i + 1);
    const double r = std::sqrt((remaining - 1.0) / remaining);
    const PathId branch = prefix + "_" + std::to_string(i - 1);
    const PathId next_rest = pool.fresh(prefix + "r");
    split(c, pool, rest, next_rest, branch, r);
    branches.push_back(branch);
    rest = next_rest;
  }
  branches.push_back(rest);
  return branches;
}

struct CombineResult {
  PathId out;
  std::vector<PathId> wastes;
};

// Left-fold combiner: realizes out = sum_j coeffs[j] * lines[j] for a
// unit-norm coefficient vector. Phases go onto the lines, magnitudes into the
// per-stage splitting ratios; each stage's difference port is a waste wire.
CombineResult combine_lines(Circuit& c, NamePool& pool,
                            const std::vector<PathId>& lines,
                            const std::vector<Complex>& coeffs,
                            const std::string& prefix) {
  if (lines.size() != coeffs.size() || lines.empty()) {
    throw BuildError("combiner needs matching, non-empty lines and coefficients");
  }
  CombineResult res;
  PathId acc;
  double acc_norm2 = 0;
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const Complex cj = coeffs[j];
    const double mag = std::abs(cj);
    PathId line = lines[j];
    if (mag < 1e-300) {
      res.wastes.push_back(line);  // zero weight: the line never merges
      continue;
    }
    if (std::arg(cj) != 0.0) {
      c.add_element(PhaseShift{line, std::arg(cj)});
    }
    if (acc.empty()) {
      acc = line;
      acc_norm2 = mag * mag;
      continue;
    }
    const double next_norm2 = acc_norm2 + mag * mag;
    const double ratio = std::sqrt(acc_norm2 / next_norm2);
    const PathId next_acc = pool.fresh(prefix + "a");
    const PathId waste = pool.fresh(prefix + "w");
    c.add_element(
        BeamSplitter{acc, line, next_acc, waste, ratio, BsConvention::hadamard});
    res.wastes.push_back(waste);
    acc = next_acc;
    acc_norm2 = next_norm2;
  }
  if (acc.empty()) throw BuildError("combiner needs at least one nonzero coefficient");
  res.out = acc;
  return res;
}

void detect_all(Circuit& c, const std::vector<PathId>& ports,
                const std::string& name_prefix) {
  int i = 0;
  for (const PathId& p : ports) {
    c.add_detector(name_prefix + "_" + std::to_string(i++), p);
  }
}

Mode src_mode(const PathId& src, long long value) {
  return Mode{src, Label::oam(value)};
}

}  // namespace

double phase_aligned_distance(const PureState& achieved, const PureState& expected) {
  const Complex ov = inner(expected, achieved);
  Complex phase(1, 0);
  if (std::abs(ov) > 1e-300) phase = ov / std::abs(ov);
  double worst = 0;
  std::set<Mode> modes;
  for (const auto& [m, a] : achieved.amplitudes()) modes.insert(m);
  for (const auto& [m, a] : expected.amplitudes()) modes.insert(m);
  for (const Mode& m : modes) {
    worst = std::max(worst,
                     std::abs(achieved.amplitude(m) - phase * expected.amplitude(m)));
  }
  return worst;
}

BuilderReport verify_detector_bras(const Circuit& circuit,
                                   const std::vector<Mode>& input_basis,
                                   const std::map<std::string, PureState>& expected,
                                   double tol) {
  const auto achieved = detector_projectors(circuit, input_basis);
  BuilderReport report;
  for (const auto& [name, bra] : expected) {
    auto it = achieved.find(name);
    if (it == achieved.end()) {
      throw BuildError("verification: circuit has no detector '" + name + "'");
    }
    const double dev = phase_aligned_distance(it->second, bra);
    report.checks.push_back({name, dev});
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  if (report.max_deviation > tol) {
    throw BuildError("builder self-check failed: max bra deviation " +
                     std::to_string(report.max_deviation));
  }
  return report;
}

// ---------------------------------------------------------------------------

PolInterferometer build_pol_interferometer() {
  PolInterferometer out;
  out.source = "in";
  Circuit& c = out.circuit;
  c.add_source("in");
  c.add_element(Sorter{"in", {{Label::v(), "top"}, {Label::h(), "bot"}}, "rej"});
  c.add_element(half_wave_plate("top", Diagonal::plus45));
  c.add_element(half_wave_plate("bot", Diagonal::minus45));
  c.add_element(BeamSplitter{"top", "bot", "c", "d", kInvSqrt2, BsConvention::hadamard});
  c.add_detector("C", "c");
  c.add_detector("D", "d");
  return out;
}

PolPairInterferometer build_pol_pair_interferometer() {
  PolPairInterferometer out;
  out.source = "in";
  Circuit& c = out.circuit;
  c.add_source("in");
  c.add_source("vac");
  c.add_element(BeamSplitter{"in", "vac", "u", "l", kInvSqrt2, BsConvention::hadamard});
  // Upper copy rotates to the +45 diagonal.
  c.add_element(Sorter{"u", {{Label::v(), "ut"}, {Label::h(), "ub"}}, "rej_u"});
  c.add_element(half_wave_plate("ut", Diagonal::plus45));
  c.add_element(half_wave_plate("ub", Diagonal::minus45));
  c.add_element(BeamSplitter{"ut", "ub", "cp", "dp", kInvSqrt2, BsConvention::hadamard});
  // Lower copy rotates to the -45 diagonal.
  c.add_element(Sorter{"l", {{Label::v(), "lt"}, {Label::h(), "lb"}}, "rej_l"});
  c.add_element(half_wave_plate("lt", Diagonal::minus45));
  c.add_element(half_wave_plate("lb", Diagonal::plus45));
  c.add_element(BeamSplitter{"lt", "lb", "cm", "dm", kInvSqrt2, BsConvention::hadamard});
  c.add_detector("C_p", "cp");
  c.add_detector("D_p", "dp");
  c.add_detector("C_m", "cm");
  c.add_detector("D_m", "dm");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Shared spoke-chain: shift to zero, 50/50 split, pairwise interferometers.
// Fills detectors and expected bras; spokes must be an index->port map of one
// parity chain in ascending index order.
void append_cd_chain(Circuit& c, NamePool& pool, const SequenceSpec& seq,
                     const std::vector<int>& chain,
                     const std::map<int, PathId>& spoke_port, const PathId& src,
                     std::vector<int>* interferometers,
                     std::map<std::string, PureState>* bras) {
  std::map<int, PathId> dn, up;  // branch toward lower / higher neighbor
  for (int k : chain) {
    const PathId sp = spoke_port.at(k);
    c.add_element(OamShift{sp, static_cast<int>(-seq.term(k))});
    const PathId d = "dn" + std::to_string(k);
    const PathId u = "up" + std::to_string(k);
    split(c, pool, sp, d, u);
    dn[k] = d;
    up[k] = u;
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const int k = chain[i];
    const bool has_lower = i > 0;
    const bool has_upper = i + 1 < chain.size();
    if (has_lower && chain[i - 1] != k - 2) {
      throw BuildError("parity chain is not contiguous at index " + std::to_string(k));
    }
    if (has_lower) {
      // Interferometer I_k: spoke k on the sum side, spoke k-2 on the other.
      const PathId cport = "c" + std::to_string(k);
      const PathId dport = "d" + std::to_string(k);
      c.add_element(BeamSplitter{dn[k], up[k - 2], cport, dport, kInvSqrt2,
                                 BsConvention::hadamard});
      c.add_detector("C_" + std::to_string(k), cport);
      c.add_detector("D_" + std::to_string(k), dport);
      if (interferometers) interferometers->push_back(k);
      if (bras) {
        PureState cb, db;
        cb.add(src_mode(src, seq.term(k)), Complex(0.5, 0));
        cb.add(src_mode(src, seq.term(k - 2)), Complex(0.5, 0));
        db.add(src_mode(src, seq.term(k)), Complex(0.5, 0));
        db.add(src_mode(src, seq.term(k - 2)), Complex(-0.5, 0));
        (*bras)["C_" + std::to_string(k)] = std::move(cb);
        (*bras)["D_" + std::to_string(k)] = std::move(db);
      }
    } else {
      const std::string name = "E_" + std::to_string(k);
      c.add_detector(name, dn[k]);
      if (bras) {
        PureState eb;
        eb.add(src_mode(src, seq.term(k)), Complex(kInvSqrt2, 0));
        (*bras)[name] = std::move(eb);
      }
    }
    if (!has_upper) {
      const std::string name =
          has_lower ? "E_" + std::to_string(k) : "E_" + std::to_string(k) + "_b";
      c.add_detector(name, up[k]);
      if (bras) {
        PureState eb;
        eb.add(src_mode(src, seq.term(k)), Complex(kInvSqrt2, 0));
        (*bras)[name] = std::move(eb);
      }
    }
  }
}

std::vector<Mode> chain_basis(const PathId& src, const SequenceSpec& seq,
                              const std::vector<int>& indices) {
  std::vector<Mode> basis;
  for (int k : indices) basis.push_back(src_mode(src, seq.term(k)));
  return basis;
}

}  // namespace

CdTree build_cd_tree(const SequenceSpec& seq, IndexParity parity) {
  CdTree out;
  out.seq = seq;
  out.source = "src";
  for (int n : seq.indices_in_range()) {
    const bool even = n % 2 == 0;
    if ((parity == IndexParity::even) == even) out.chain.push_back(n);
  }
  if (out.chain.size() < 3) {
    throw BuildError("cd-tree needs at least 3 chain values of the chosen parity, got " +
                     std::to_string(out.chain.size()));
  }
  Circuit& c = out.circuit;
  NamePool pool;
  c.add_source(out.source);
  std::map<Label, PathId> table;
  std::map<int, PathId> spoke;
  for (int k : out.chain) {
    const PathId sp = "sp" + std::to_string(k);
    table.emplace(Label::oam(seq.term(k)), sp);
    spoke[k] = sp;
  }
  c.add_element(Sorter{out.source, std::move(table), "rej"});
  append_cd_chain(c, pool, seq, out.chain, spoke, out.source, &out.interferometers,
                  &out.expected_bras);
  out.verification = verify_detector_bras(
      c, chain_basis(out.source, seq, out.chain), out.expected_bras, kVerifyTol);
  return out;
}

// ---------------------------------------------------------------------------

SuperpositionTarget SuperpositionTarget::from_list(std::vector<Complex> coeffs,
                                                   std::vector<long long> values) {
  SuperpositionTarget t;
  const std::size_t n = coeffs.size();
  t.coeffs = std::move(coeffs);
  // values[j] is x_{m-1-j}; store ascending by internal index so that
  // x_{m-j} = values[m-j-1] with m = n.
  t.values.assign(values.rbegin(), values.rend());
  t.anchor = static_cast<int>(n) + 1;
  t.validate();
  return t;
}

std::vector<long long> SuperpositionTarget::selected_values() const {
  std::vector<long long> out;
  for (std::size_t j = 1; j <= coeffs.size(); ++j) {
    const int idx = anchor - static_cast<int>(j);
    out.push_back(values.at(static_cast<std::size_t>(idx) - 1));
  }
  return out;
}

void SuperpositionTarget::validate() const {
  if (coeffs.empty()) throw BuildError("superposition target needs coefficients");
  if (anchor - static_cast<int>(coeffs.size()) < 1 ||
      anchor - 1 > static_cast<int>(values.size())) {
    throw BuildError("superposition target anchor outside the value list");
  }
  double max_mag = 0;
  for (const Complex& a : coeffs) max_mag = std::max(max_mag, std::abs(a));
  if (max_mag < 1e-300) throw BuildError("superposition target has all-zero coefficients");
  std::set<long long> distinct(values.begin(), values.end());
  if (distinct.size() != values.size()) {
    throw BuildError("superposition target values must be distinct");
  }
}

namespace {

// Common construction for the detection and synthesis orientations.
struct SgdtWires {
  Circuit circuit;
  PathId out;                      // cascade sum port
  std::vector<PathId> wastes;      // cascade difference ports
};

SgdtWires build_sgdt_wires(const SuperpositionTarget& target, const PathId& src,
                           bool with_shifts) {
  target.validate();
  SgdtWires w;
  NamePool pool;
  Circuit& c = w.circuit;
  const auto sel = target.selected_values();
  const std::size_t n = sel.size();
  double a_max = 0;
  for (const Complex& a : target.coeffs) a_max = std::max(a_max, std::abs(a));

  c.add_source(src);
  std::map<Label, PathId> table;
  std::vector<PathId> lines;
  for (std::size_t j = 0; j < n; ++j) {
    const PathId line = "ln" + std::to_string(j + 1);
    table.emplace(Label::oam(sel[j]), line);
    lines.push_back(line);
  }
  c.add_element(Sorter{src, std::move(table), "rej"});
  for (std::size_t j = 0; j < n; ++j) {
    if (with_shifts) {
      c.add_element(OamShift{lines[j], static_cast<int>(-sel[j])});
    }
    const double t = std::abs(target.coeffs[j]) / a_max;
    if (t < 1.0) c.add_element(Attenuator{lines[j], t});
    const double phi = std::arg(target.coeffs[j]);
    if (phi != 0.0) c.add_element(PhaseShift{lines[j], phi});
  }
  // Equal-weight cascade: the coefficients already live in the line
  // attenuations and phases.
  const std::vector<Complex> weights(n, Complex(1.0 / std::sqrt(double(n)), 0));
  auto combined = combine_lines(c, pool, lines, weights, "cas");
  w.out = combined.out;
  w.wastes = std::move(combined.wastes);
  return w;
}

}  // namespace

Sgdt build_sgdt(const SuperpositionTarget& target) {
  Sgdt out;
  out.target = target;
  out.source = "src";
  SgdtWires w = build_sgdt_wires(target, out.source, /*with_shifts=*/true);
  out.circuit = std::move(w.circuit);
  out.circuit.add_detector("C", w.out);
  out.c_detector = "C";
  for (std::size_t i = 0; i < w.wastes.size(); ++i) {
    const std::string name = "D_" + std::to_string(i + 1);
    out.circuit.add_detector(name, w.wastes[i]);
    out.d_detectors.push_back(name);
  }
  const auto sel = target.selected_values();
  double a_max = 0;
  for (const Complex& a : target.coeffs) a_max = std::max(a_max, std::abs(a));
  const double w_line = 1.0 / std::sqrt(double(sel.size()));
  for (std::size_t j = 0; j < sel.size(); ++j) {
    out.target_bra.add(src_mode(out.source, sel[j]),
                       std::conj(target.coeffs[j]) / a_max * w_line);
  }
  std::vector<Mode> basis;
  for (long long v : sel) basis.push_back(src_mode(out.source, v));
  out.verification = verify_detector_bras(out.circuit, basis,
                                          {{out.c_detector, out.target_bra}},
                                          kVerifyTol);
  return out;
}

Synthesizer build_synthesizer(const SuperpositionTarget& target) {
  Synthesizer out;
  out.target = target;
  out.source = "src";
  SgdtWires w = build_sgdt_wires(target, out.source, /*with_shifts=*/false);
  out.circuit = std::move(w.circuit);
  out.c_out = w.out;
  out.d_outs = std::move(w.wastes);

  const auto sel = target.selected_values();
  const std::size_t n = sel.size();
  double a_max = 0;
  for (const Complex& a : target.coeffs) a_max = std::max(a_max, std::abs(a));
  for (std::size_t j = 0; j < n; ++j) {
    out.target_ket.add(Mode{out.c_out, Label::oam(sel[j])},
                       target.coeffs[j] / (a_max * double(n)));
  }
  // Self-check against the sparse engine: uniform input must produce the
  // target ket at the sum port.
  const PureState produced = port_state(simulate(out.circuit, out.canonical_input()),
                                        out.c_out);
  const double dev = phase_aligned_distance(produced, out.target_ket);
  if (dev > kVerifyTol) {
    throw BuildError("synthesizer self-check failed: output deviation " +
                     std::to_string(dev));
  }
  return out;
}

PureState Synthesizer::canonical_input() const {
  const auto sel = target.selected_values();
  PureState in;
  const double amp = 1.0 / std::sqrt(double(sel.size()));
  for (long long v : sel) in.add(Mode{source, Label::oam(v)}, Complex(amp, 0));
  return in;
}

// ---------------------------------------------------------------------------

TribonacciTree build_tribonacci_tree(const SequenceSpec& seq) {
  TribonacciTree out;
  out.seq = seq;
  out.source = "src";
  out.chain = seq.indices_in_range();
  if (out.chain.size() < 4) {
    throw BuildError("tribonacci tree needs at least 4 values in range, got " +
                     std::to_string(out.chain.size()));
  }
  Circuit& c = out.circuit;
  NamePool pool;
  c.add_source(out.source);
  std::map<Label, PathId> table;
  for (int k : out.chain) {
    table.emplace(Label::oam(seq.term(k)), "sp" + std::to_string(k));
  }
  c.add_element(Sorter{out.source, std::move(table), "rej"});

  // Every spoke fans out six equal branches: slots 0..2 feed the C-combiners
  // of groups k, k+1, k+2 and slots 3..5 the D-combiners.
  std::map<int, std::vector<PathId>> branch;
  for (int k : out.chain) {
    const PathId sp = "sp" + std::to_string(k);
    c.add_element(OamShift{sp, static_cast<int>(-seq.term(k))});
    branch[k] = equal_fanout(c, pool, sp, 6, "b" + std::to_string(k));
  }

  const double w3 = 1.0 / std::sqrt(3.0);
  std::set<std::pair<int, int>> used;  // (spoke, slot)
  for (std::size_t i = 2; i < out.chain.size(); ++i) {
    const int k = out.chain[i];
    const int k1 = out.chain[i - 1];
    const int k2 = out.chain[i - 2];
    out.groups.push_back(k);
    {
      auto res = combine_lines(c, pool,
                               {branch[k][0], branch[k1][1], branch[k2][2]},
                               {Complex(w3, 0), Complex(w3, 0), Complex(w3, 0)},
                               "cc" + std::to_string(k));
      c.add_detector("C_" + std::to_string(k), res.out);
      detect_all(c, res.wastes, "WC_" + std::to_string(k));
      used.insert({k, 0});
      used.insert({k1, 1});
      used.insert({k2, 2});
    }
    {
      auto res = combine_lines(c, pool,
                               {branch[k][3], branch[k1][4], branch[k2][5]},
                               {Complex(w3, 0), Complex(-w3, 0), Complex(-w3, 0)},
                               "cd" + std::to_string(k));
      c.add_detector("D_" + std::to_string(k), res.out);
      detect_all(c, res.wastes, "WD_" + std::to_string(k));
      used.insert({k, 3});
      used.insert({k1, 4});
      used.insert({k2, 5});
    }
    const double amp = w3 / std::sqrt(6.0);
    PureState cb, db;
    cb.add(src_mode(out.source, seq.term(k)), Complex(amp, 0));
    cb.add(src_mode(out.source, seq.term(k1)), Complex(amp, 0));
    cb.add(src_mode(out.source, seq.term(k2)), Complex(amp, 0));
    db.add(src_mode(out.source, seq.term(k)), Complex(amp, 0));
    db.add(src_mode(out.source, seq.term(k1)), Complex(-amp, 0));
    db.add(src_mode(out.source, seq.term(k2)), Complex(-amp, 0));
    out.expected_bras["C_" + std::to_string(k)] = std::move(cb);
    out.expected_bras["D_" + std::to_string(k)] = std::move(db);
  }
  // Boundary branches that never met a combiner end on auxiliary detectors.
  for (int k : out.chain) {
    for (int s = 0; s < 6; ++s) {
      if (!used.count({k, s})) {
        c.add_detector("E_" + std::to_string(k) + "_" + std::to_string(s),
                       branch[k][static_cast<std::size_t>(s)]);
      }
    }
  }
  out.verification = verify_detector_bras(
      c, chain_basis(out.source, seq, out.chain), out.expected_bras, kVerifyTol);
  return out;
}

// ---------------------------------------------------------------------------

Mub4 build_mub4(const std::array<long long, 4>& values) {
  std::set<long long> distinct(values.begin(), values.end());
  if (distinct.size() != 4) throw BuildError("mub4 needs four distinct labels");

  Mub4 out;
  out.values = values;
  out.l_source = "src";
  out.m_source = "src";

  {
    Circuit& c = out.l_circuit;
    c.add_source(out.l_source);
    std::map<Label, PathId> table;
    for (int i = 0; i < 4; ++i) {
      table.emplace(Label::oam(values[static_cast<std::size_t>(i)]),
                    "l" + std::to_string(i + 1));
    }
    c.add_element(Sorter{out.l_source, std::move(table), "rej"});
    for (int i = 0; i < 4; ++i) {
      const std::string name = "L_" + std::to_string(i + 1);
      c.add_detector(name, "l" + std::to_string(i + 1));
      PureState bra;
      bra.add(src_mode(out.l_source, values[static_cast<std::size_t>(i)]), Complex(1, 0));
      out.l_bras[name] = std::move(bra);
    }
  }

  {
    Circuit& c = out.m_circuit;
    c.add_source(out.m_source);
    std::map<Label, PathId> table;
    for (int i = 0; i < 4; ++i) {
      table.emplace(Label::oam(values[static_cast<std::size_t>(i)]),
                    "m" + std::to_string(i + 1));
    }
    c.add_element(Sorter{out.m_source, std::move(table), "rej"});
    for (int i = 0; i < 4; ++i) {
      c.add_element(OamShift{"m" + std::to_string(i + 1),
                             static_cast<int>(-values[static_cast<std::size_t>(i)])});
    }
    // Four-mode Hadamard mesh; exact unitarity makes all POVM weights equal
    // with no extra equalization splitters.
    c.add_element(BeamSplitter{"m1", "m2", "u1", "u2", kInvSqrt2, BsConvention::hadamard});
    c.add_element(BeamSplitter{"m3", "m4", "u3", "u4", kInvSqrt2, BsConvention::hadamard});
    c.add_element(BeamSplitter{"u1", "u3", "w1", "w2", kInvSqrt2, BsConvention::hadamard});
    c.add_element(BeamSplitter{"u2", "u4", "w3", "w4", kInvSqrt2, BsConvention::hadamard});
    c.add_detector("M_1", "w1");
    c.add_detector("M_2", "w2");
    c.add_detector("M_3", "w4");
    c.add_detector("M_4", "w3");

    const double h = 0.5;
    const double sign[4][4] = {{h, h, h, h},
                               {h, h, -h, -h},
                               {h, -h, -h, h},
                               {h, -h, h, -h}};
    for (int j = 0; j < 4; ++j) {
      PureState bra;
      for (int i = 0; i < 4; ++i) {
        bra.add(src_mode(out.m_source, values[static_cast<std::size_t>(i)]),
                Complex(sign[j][i], 0));
      }
      out.m_bras["M_" + std::to_string(j + 1)] = std::move(bra);
    }
  }

  std::vector<Mode> basis;
  for (long long v : values) basis.push_back(src_mode("src", v));
  std::sort(basis.begin(), basis.end());
  out.l_verification = verify_detector_bras(out.l_circuit, basis, out.l_bras, kVerifyTol);
  out.m_verification = verify_detector_bras(out.m_circuit, basis, out.m_bras, kVerifyTol);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct CellPorts {
  PathId out_a;  // pass-through of the older line
  PathId out_b;  // pass-through of the newer line
  PathId out_new;
};

// One recursive-generator cell. in_a carries the older chain state psi_a
// (recurrence weight coeff_a), in_b the newer psi_b (weight coeff_b), both at
// equal wire amplitude. Both inputs split 50/50; the taps carry the
// recurrence weights (attenuation |c|/cmax, phase arg c) and meet at a 50/50
// combiner. combined_norm is |coeff_a psi_a + coeff_b psi_b|: because chain
// states are not orthogonal this exceeds sqrt2*cmax as the chain deepens, and
// the new line is attenuated by sqrt2*cmax/combined_norm to keep all three
// outputs at exactly half the input intensity.
CellPorts append_rsg_cell(Circuit& c, NamePool& pool, int index, const PathId& in_a,
                          const PathId& in_b, Complex coeff_a, Complex coeff_b,
                          double combined_norm) {
  const std::string tag = std::to_string(index);
  CellPorts ports{"o" + tag + "a", "o" + tag + "b", "o" + tag + "n"};
  const double ua = std::abs(coeff_a);
  const double ub = std::abs(coeff_b);
  const double umax = std::max(ua, ub);
  if (umax < 1e-300) throw BuildError("rsg cell needs a nonzero recurrence coefficient");

  const PathId tap_a = "t" + tag + "a";
  const PathId tap_b = "t" + tag + "b";
  split(c, pool, in_a, ports.out_a, tap_a);
  split(c, pool, in_b, ports.out_b, tap_b);
  if (ua / umax < 1.0) c.add_element(Attenuator{tap_a, ua / umax});
  if (std::arg(coeff_a) != 0.0) c.add_element(PhaseShift{tap_a, std::arg(coeff_a)});
  if (ub / umax < 1.0) c.add_element(Attenuator{tap_b, ub / umax});
  if (std::arg(coeff_b) != 0.0) c.add_element(PhaseShift{tap_b, std::arg(coeff_b)});
  const PathId merged = "g" + tag;
  const PathId waste = "gw" + tag;
  c.add_element(BeamSplitter{tap_a, tap_b, merged, waste, kInvSqrt2,
                             BsConvention::hadamard});
  c.add_detector("W_" + tag, waste);
  ports.out_new = merged;
  const double t_new = std::sqrt(2.0) * umax / combined_norm;
  if (t_new > 1.0 + 1e-12) {
    // Mixed-sign recurrences can shrink the combined state below the
    // pass-through level; equalizing would then need gain, not attenuation.
    throw BuildError("rsg cell cannot equalize: combined state norm " +
                     std::to_string(combined_norm) + " is below sqrt2*max|c|");
  }
  if (t_new < 1.0 - 1e-15) {
    c.add_element(Attenuator{merged, t_new});
  }
  return ports;
}

}  // namespace

RsgCell build_rsg_cell() {
  RsgCell out;
  out.in1 = "in1";
  out.in2 = "in2";
  Circuit& c = out.circuit;
  NamePool pool;
  c.add_source(out.in1);
  c.add_source(out.in2);
  auto ports = append_rsg_cell(c, pool, 1, out.in1, out.in2, Complex(1, 0),
                               Complex(1, 0), std::sqrt(2.0));
  out.out1 = ports.out_a;
  out.out2 = ports.out_b;
  out.out3 = ports.out_new;
  return out;
}

PureState Rsg::canonical_input() const {
  PureState in;
  in.add(Mode{source, Label::oam(x0)}, Complex(kInvSqrt2, 0));
  in.add(Mode{source, Label::oam(x1)}, Complex(kInvSqrt2, 0));
  return in;
}

Rsg build_rsg(int p, const SequenceSpec& seq, bool equalize) {
  if (p < 1) throw BuildError("rsg needs at least one cell");
  seq.validate();
  if (seq.coeffs.size() != 2) {
    throw BuildError("rsg supports two-term recurrences; got order " +
                     std::to_string(seq.coeffs.size()));
  }
  const auto values = seq.generate();
  if (values.size() < 2) throw BuildError("rsg needs two sequence values in range");

  Rsg out;
  out.seq = seq;
  out.cells = p;
  out.equalized = equalize;
  out.source = "src";
  out.x0 = values[0];
  out.x1 = values[1];
  const Complex c1(static_cast<double>(seq.coeffs[0]), 0);  // weight of x_{k-1}
  const Complex c2(static_cast<double>(seq.coeffs[1]), 0);  // weight of x_{k-2}

  Circuit& c = out.circuit;
  NamePool pool;
  c.add_source(out.source);
  c.add_element(Sorter{out.source,
                       {{Label::oam(out.x0), "A0"}, {Label::oam(out.x1), "B0"}},
                       "rej"});

  // Track the chain's unit states on the two injected labels to know each
  // cell's overlap factor. Label order: (x0, x1).
  using Vec2 = std::array<Complex, 2>;
  auto norm2 = [](const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); };
  Vec2 prev{Complex(1, 0), Complex(0, 0)};  // x-hat_1 = |x0>
  Vec2 curr{Complex(0, 0), Complex(1, 0)};  // x-hat_2 = |x1>

  PathId line_a = "A0";  // carries x-hat_i
  PathId line_b = "B0";  // carries x-hat_{i+1}
  std::vector<PathId> exits;
  for (int i = 1; i <= p; ++i) {
    Vec2 next{c2 * prev[0] + c1 * curr[0], c2 * prev[1] + c1 * curr[1]};
    const double combined_norm = std::sqrt(norm2(next));
    auto ports = append_rsg_cell(c, pool, i, line_a, line_b, c2, c1, combined_norm);
    exits.push_back(ports.out_a);
    if (i == p) {
      exits.push_back(ports.out_b);
      exits.push_back(ports.out_new);
    }
    line_a = ports.out_b;
    line_b = ports.out_new;
    const double nn = std::sqrt(norm2(next));
    prev = curr;
    curr = {next[0] / nn, next[1] / nn};
  }
  out.outputs = exits;
  if (equalize) {
    // Pass-through exits left the cascade early; bring everything to the
    // amplitude of the final cell's ports.
    for (int i = 1; i <= p - 1; ++i) {
      const double t = std::pow(kInvSqrt2, double(p - i));
      c.add_element(Attenuator{out.outputs[static_cast<std::size_t>(i - 1)], t});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DAnalyzer build_d_analyzer(const SequenceSpec& seq, const std::vector<int>& indices) {
  DAnalyzer out;
  out.seq = seq;
  out.indices = indices;
  out.source = "src";
  if (indices.size() < 2) throw BuildError("d-analyzer needs at least two indices");
  Circuit& c = out.circuit;
  NamePool pool;
  c.add_source(out.source);
  std::map<Label, PathId> table;
  std::map<int, PathId> spoke;
  std::vector<int> even, odd;
  for (int k : indices) {
    const PathId sp = "sp" + std::to_string(k);
    table.emplace(Label::oam(seq.term(k)), sp);
    spoke[k] = sp;
    (k % 2 == 0 ? even : odd).push_back(k);
  }
  c.add_element(Sorter{out.source, std::move(table), "rej"});
  for (auto* chain : {&even, &odd}) {
    if (chain->empty()) continue;
    std::sort(chain->begin(), chain->end());
    append_cd_chain(c, pool, seq, *chain, spoke, out.source, nullptr,
                    &out.expected_bras);
  }
  out.verification = verify_detector_bras(
      c, chain_basis(out.source, seq, indices), out.expected_bras, kVerifyTol);
  return out;
}

LAnalyzer build_l_analyzer(const SequenceSpec& seq, const std::vector<int>& indices) {
  LAnalyzer out;
  out.seq = seq;
  out.indices = indices;
  out.source = "src";
  if (indices.empty()) throw BuildError("l-analyzer needs indices");
  Circuit& c = out.circuit;
  c.add_source(out.source);
  std::map<Label, PathId> table;
  for (int k : indices) {
    table.emplace(Label::oam(seq.term(k)), "l" + std::to_string(k));
  }
  c.add_element(Sorter{out.source, std::move(table), "rej"});
  for (int k : indices) {
    c.add_detector("F_" + std::to_string(k), "l" + std::to_string(k));
  }
  return out;
}

}  // namespace oam
