#include <doctest.h>

#include <cmath>

#include "oam/builders.hpp"
#include "oam/measurement.hpp"
#include "oam/rng.hpp"

using namespace oam;

namespace {

const SequenceSpec kFib = SequenceSpec::fibonacci(2, 55);

PureState named_on(const std::string& src, StateFamily f, int n,
                   const SequenceSpec& seq = kFib) {
  return make_named_state(f, n, seq, src);
}

double detector_probability(const Circuit& c, const PureState& in,
                            const std::string& name) {
  return probabilities(c, in).p.at(name);
}

SuperpositionTarget random_target(std::uint64_t seed, std::size_t max_terms = 5) {
  SplitMix64 rng = stream_for(seed, 3);
  const std::size_t n = 1 + rng.next_below(max_terms);
  std::vector<Complex> coeffs;
  for (std::size_t j = 0; j < n; ++j) {
    const double mag = 0.2 + 0.8 * rng.next_double();
    const double phase = rng.next_double() * 6.28318530717959;
    coeffs.push_back(std::polar(mag, phase));
  }
  std::vector<long long> values;
  long long v = static_cast<long long>(rng.next_below(7)) - 3;
  for (std::size_t j = 0; j < n; ++j) {
    values.push_back(v);
    v += 1 + static_cast<long long>(rng.next_below(5));
  }
  return SuperpositionTarget::from_list(coeffs, values);
}

}  // namespace

TEST_CASE("cd-tree: matched superposition extinguishes its D detector") {
  const auto tree = build_cd_tree(kFib, IndexParity::even);
  // chain indices 2,4,6,8; S_7 = (F_6 + F_8)/sqrt2 targets interferometer 8.
  const PureState s7 = named_on(tree.source, StateFamily::S, 7);
  CHECK(detector_probability(tree.circuit, s7, "D_8") < 1e-12);
  CHECK(detector_probability(tree.circuit, s7, "C_8") ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Neighbor leakage through the unpaired half of each spoke.
  CHECK(detector_probability(tree.circuit, s7, "C_6") ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK(detector_probability(tree.circuit, s7, "D_6") ==
        doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("cd-tree: eigenstates split evenly over their four detectors") {
  const auto tree = build_cd_tree(kFib, IndexParity::even);
  const PureState f6 = named_on(tree.source, StateFamily::F, 6);
  for (const char* d : {"C_6", "D_6", "C_8", "D_8"}) {
    CHECK(detector_probability(tree.circuit, f6, d) ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("cd-tree: probabilities sum to one (tree is lossless)") {
  const auto tree = build_cd_tree(kFib, IndexParity::odd);
  const PureState f5 = named_on(tree.source, StateFamily::F, 5);
  const Distribution dist = probabilities(tree.circuit, f5);
  CHECK(std::abs(dist.loss) < 1e-12);
}

TEST_CASE("cd-tree needs three chain values") {
  CHECK_THROWS_AS(build_cd_tree(SequenceSpec::fibonacci(2, 5), IndexParity::even),
                  BuildError);
}

TEST_CASE("sgdt: tribonacci-style equal coefficients") {
  const auto target = SuperpositionTarget::from_list(
      {Complex(1, 0), Complex(1, 0), Complex(1, 0)}, {13, 7, 4});
  const auto sgdt = build_sgdt(target);
  CHECK(sgdt.verification.max_deviation < 1e-12);
  // C bra proportional to <13| + <7| + <4|.
  const PureState want = [] {
    PureState s;
    for (long long v : {13, 7, 4}) s.add({"src", Label::oam(v)}, Complex(1, 0));
    return s;
  }();
  CHECK(phase_aligned_deviation(sgdt.target_bra, want) < 1e-12);
}

TEST_CASE("sgdt: the jump target (-1, 1/2)") {
  const auto target = SuperpositionTarget::from_list(
      {Complex(-1, 0), Complex(0.5, 0)}, {8, 5});
  const auto sgdt = build_sgdt(target);
  PureState want;
  want.add({"src", Label::oam(8)}, Complex(-1, 0));
  want.add({"src", Label::oam(5)}, Complex(0.5, 0));
  CHECK(phase_aligned_deviation(sgdt.target_bra, want) < 1e-12);
  // The matched input maximizes C among the detectors.
  PureState in;
  in.add({"src", Label::oam(8)}, Complex(-1, 0) / std::sqrt(1.25));
  in.add({"src", Label::oam(5)}, Complex(0.5, 0) / std::sqrt(1.25));
  const auto dist = probabilities(sgdt.circuit, in);
  CHECK(dist.p.at("C") > dist.p.at("D_1"));
}

TEST_CASE("sgdt: single-coefficient target degenerates to an eigenstate detector") {
  const auto sgdt =
      build_sgdt(SuperpositionTarget::from_list({Complex(1, 0)}, {5}));
  PureState in;
  in.add({"src", Label::oam(5)}, Complex(1, 0));
  CHECK(detector_probability(sgdt.circuit, in, "C") ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sgdt rejects all-zero targets") {
  CHECK_THROWS_AS(
      build_sgdt(SuperpositionTarget::from_list({Complex(0, 0)}, {5})), BuildError);
}

TEST_CASE("sgdt: random complex targets verify against the oracle") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto sgdt = build_sgdt(random_target(seed));
    CHECK(sgdt.verification.max_deviation < 1e-10);
  }
}

TEST_CASE("tribonacci tree bras and the 1/9 ratio") {
  const auto seq = SequenceSpec::tribonacci(1, 100);  // 1 2 4 7 13 24 44 81
  const auto tree = build_tribonacci_tree(seq);
  CHECK(tree.verification.max_deviation < 1e-10);

  // Uniform three-term input: P(D_k)/P(C_k) = |1-1-1|^2 / |1+1+1|^2 = 1/9.
  const int k = tree.groups[1];
  PureState in;
  const double r3 = 1.0 / std::sqrt(3.0);
  for (int d = 0; d < 3; ++d) {
    in.add({tree.source, Label::oam(seq.term(k - d))}, Complex(r3, 0));
  }
  const double pc = detector_probability(tree.circuit, in, "C_" + std::to_string(k));
  const double pd = detector_probability(tree.circuit, in, "D_" + std::to_string(k));
  CHECK(pd / pc == doctest::Approx(1.0 / 9.0).epsilon(1e-10));

  // An eigenstate feeds C_k and D_k equally.
  PureState eig;
  eig.add({tree.source, Label::oam(seq.term(k))}, Complex(1, 0));
  CHECK(detector_probability(tree.circuit, eig, "C_" + std::to_string(k)) ==
        doctest::Approx(
            detector_probability(tree.circuit, eig, "D_" + std::to_string(k)))
            .epsilon(1e-12));
}

TEST_CASE("mub4: cross-basis overlaps are all 1/4") {
  const auto mub = build_mub4({2, 3, 5, 8});
  CHECK(mub.l_verification.max_deviation < 1e-12);
  CHECK(mub.m_verification.max_deviation < 1e-12);
  for (const auto& [ln, lb] : mub.l_bras) {
    for (const auto& [mn, mb] : mub.m_bras) {
      CHECK(std::norm(inner(lb, mb)) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
}

TEST_CASE("mub4: psi_2 hits only M_2; eigenstates spread evenly") {
  const auto mub = build_mub4({2, 3, 5, 8});
  // psi_2 = (|2> + |3> - |5> - |8>)/2
  PureState psi2;
  psi2.add({"src", Label::oam(2)}, Complex(0.5, 0));
  psi2.add({"src", Label::oam(3)}, Complex(0.5, 0));
  psi2.add({"src", Label::oam(5)}, Complex(-0.5, 0));
  psi2.add({"src", Label::oam(8)}, Complex(-0.5, 0));
  const auto dist = probabilities(mub.m_circuit, psi2);
  CHECK(dist.p.at("M_2") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist.p.at("M_1") < 1e-12);
  CHECK(dist.p.at("M_3") < 1e-12);
  CHECK(dist.p.at("M_4") < 1e-12);

  PureState f;
  f.add({"src", Label::oam(2)}, Complex(1, 0));
  const auto ed = probabilities(mub.m_circuit, f);
  for (const char* m : {"M_1", "M_2", "M_3", "M_4"}) {
    CHECK(ed.p.at(m) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("mub4 rejects duplicate labels") {
  CHECK_THROWS_AS(build_mub4({2, 2, 5, 8}), BuildError);
}

TEST_CASE("rsg cell: canonical input gives three equal outputs") {
  const auto cell = build_rsg_cell();
  PureState in;
  const double r = 1.0 / std::sqrt(2.0);
  in.add({cell.in1, Label::oam(2)}, Complex(r, 0));
  in.add({cell.in2, Label::oam(3)}, Complex(r, 0));
  const PureState out = simulate(cell.circuit, in);
  const double n1 = port_state(out, cell.out1).norm();
  const double n2 = port_state(out, cell.out2).norm();
  const double n3 = port_state(out, cell.out3).norm();
  CHECK(n1 == doctest::Approx(n2).epsilon(1e-12));
  CHECK(n1 == doctest::Approx(n3).epsilon(1e-12));
  // Post-selected on the three outputs: (|x0> + |x1> + |xhat2>)/sqrt3, where
  // the new line carries the normalized sum.
  const PureState new_line = label_vector(out, cell.out3).normalized();
  PureState want;
  want.add({PathId{}, Label::oam(2)}, Complex(r, 0));
  want.add({PathId{}, Label::oam(3)}, Complex(r, 0));
  CHECK(phase_aligned_deviation(new_line, want) < 1e-12);
}

TEST_CASE("rsg cell: single-port input leaves the other pass-through empty") {
  const auto cell = build_rsg_cell();
  PureState in;
  in.add({cell.in1, Label::oam(2)}, Complex(1, 0));
  const PureState out = simulate(cell.circuit, in);
  CHECK(port_state(out, cell.out1).norm2() > 0);
  CHECK(port_state(out, cell.out2).norm2() == 0);
  CHECK(port_state(out, cell.out3).norm2() > 0);
}

TEST_CASE("rsg cell: vacuum in, vacuum out") {
  const auto cell = build_rsg_cell();
  const PureState out = simulate(cell.circuit, PureState{});
  CHECK(out.empty());
}

TEST_CASE("rsg: outputs are equal, recurrent, and halve before equalization") {
  const auto seq = SequenceSpec::fibonacci(1, 400);
  for (int p = 1; p <= 3; ++p) {
    const auto rsg = build_rsg(p, seq, true);
    REQUIRE(static_cast<int>(rsg.outputs.size()) == p + 2);
    const PureState out = simulate(rsg.circuit, rsg.canonical_input());
    std::vector<PureState> states;
    for (const auto& port : rsg.outputs) states.push_back(label_vector(out, port));
    for (std::size_t k = 1; k < states.size(); ++k) {
      CHECK(states[k].norm() == doctest::Approx(states[0].norm()).epsilon(1e-10));
    }
    for (std::size_t k = 2; k < states.size(); ++k) {
      const PureState target =
          (states[k - 1].normalized() + states[k - 2].normalized()).normalized();
      CHECK(std::abs(inner(states[k].normalized(), target)) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }

    const auto raw = build_rsg(p, seq, false);
    const PureState raw_out = simulate(raw.circuit, raw.canonical_input());
    std::vector<double> intensity;
    for (const auto& port : raw.outputs) {
      intensity.push_back(label_vector(raw_out, port).norm2());
    }
    for (int i = 0; i + 1 < p; ++i) {
      CHECK(intensity[static_cast<std::size_t>(i + 1)] /
                intensity[static_cast<std::size_t>(i)] ==
            doctest::Approx(0.5).epsilon(1e-10));
    }
    // The last cell's three ports share one level.
    const std::size_t last = intensity.size() - 1;
    CHECK(intensity[last] == doctest::Approx(intensity[last - 1]).epsilon(1e-10));
  }
}

TEST_CASE("rsg works on the lucas sequence too") {
  const auto rsg = build_rsg(2, SequenceSpec::lucas(1, 400), true);
  CHECK(rsg.x0 == 1);
  CHECK(rsg.x1 == 3);
  const PureState out = simulate(rsg.circuit, rsg.canonical_input());
  CHECK(label_vector(out, rsg.outputs[3]).norm2() > 0);
}

TEST_CASE("synthesizer produces the target ket and its complement") {
  const auto target = SuperpositionTarget::from_list(
      {Complex(1, 0), Complex(1, 0)}, {21, 8});
  const auto synth = build_synthesizer(target);
  const PureState out = simulate(synth.circuit, synth.canonical_input());
  PureState want_c;
  want_c.add({PathId{}, Label::oam(21)}, Complex(1, 0));
  want_c.add({PathId{}, Label::oam(8)}, Complex(1, 0));
  CHECK(phase_aligned_deviation(label_vector(out, synth.c_out), want_c) < 1e-10);
  // The complementary port of the (1,1) tree carries the difference state.
  PureState want_d;
  want_d.add({PathId{}, Label::oam(21)}, Complex(1, 0));
  want_d.add({PathId{}, Label::oam(8)}, Complex(-1, 0));
  CHECK(phase_aligned_deviation(label_vector(out, synth.d_outs.front()), want_d) <
        1e-10);
}

TEST_CASE("synthesis/detection duality on random targets") {
  for (std::uint64_t seed = 50; seed < 65; ++seed) {
    const auto target = random_target(seed);
    const auto sgdt = build_sgdt(target);
    const auto synth = build_synthesizer(target);
    const PureState produced =
        label_vector(simulate(synth.circuit, synth.canonical_input()), synth.c_out);
    PureState bra_conj;
    for (const auto& [m, a] : sgdt.target_bra.amplitudes()) {
      bra_conj.add({PathId{}, m.label}, std::conj(a));
    }
    CHECK(phase_aligned_deviation(produced, bra_conj) < 1e-10);
  }
}

TEST_CASE("four-detector polarization pair: V spreads, diagonals pick two") {
  const auto pol = build_pol_pair_interferometer();
  PureState v;
  v.add({pol.source, Label::v()}, Complex(1, 0));
  const auto dv = probabilities(pol.circuit, v);
  for (const char* d : {"C_p", "D_p", "C_m", "D_m"}) {
    CHECK(dv.p.at(d) == doctest::Approx(0.25).epsilon(1e-12));
  }
  const double r = 1.0 / std::sqrt(2.0);
  PureState up;  // +45
  up.add({pol.source, Label::h()}, Complex(r, 0));
  up.add({pol.source, Label::v()}, Complex(r, 0));
  const auto du = probabilities(pol.circuit, up);
  CHECK(du.p.at("C_p") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(du.p.at("D_m") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(du.p.at("D_p") < 1e-12);
  CHECK(du.p.at("C_m") < 1e-12);
}

TEST_CASE("d-analyzer covers both parity chains from one sorter") {
  const auto an = build_d_analyzer(SequenceSpec::fibonacci(1, 400), {3, 4, 5, 6, 7});
  CHECK(an.verification.max_deviation < 1e-10);
  PureState s6 = make_named_state(StateFamily::S, 6, an.seq, an.source);
  CHECK(probabilities(an.circuit, s6).p.at("D_7") < 1e-12);
}
