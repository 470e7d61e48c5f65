#include <doctest.h>

#include <cmath>

#include "oam/circuit.hpp"
#include "oam/engine.hpp"
#include "oam/rng.hpp"

using namespace oam;

namespace {
constexpr double kR = 0.70710678118654752;

PureState oam_basis(const PathId& p, int l, Complex a = Complex(1, 0)) {
  PureState s;
  s.add({p, Label::oam(l)}, a);
  return s;
}
}  // namespace

TEST_CASE("hadamard beam splitter splits a single input 50/50") {
  const Element bs = BeamSplitter{"a", "b", "c", "d", kR, BsConvention::hadamard};
  const PureState out = oam::apply(bs, oam_basis("a", 0));
  CHECK(out.amplitude({"c", Label::oam(0)}).real() == doctest::Approx(kR));
  CHECK(out.amplitude({"d", Label::oam(0)}).real() == doctest::Approx(kR));
}

TEST_CASE("beam splitter conventions are unitary at any ratio") {
  SplitMix64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const double ratio = 0.05 + 0.9 * rng.next_double();
    for (BsConvention conv : {BsConvention::hadamard, BsConvention::symmetric}) {
      const Element bs = BeamSplitter{"a", "b", "c", "d", ratio, conv};
      PureState in;
      in.add({"a", Label::oam(1)}, Complex(rng.next_double() - 0.5, rng.next_double()));
      in.add({"b", Label::oam(1)}, Complex(rng.next_double(), rng.next_double() - 0.5));
      const PureState out = oam::apply(bs, in);
      CHECK(std::abs(out.norm2() - in.norm2()) < 1e-12);
    }
  }
}

TEST_CASE("symmetric convention at 50/50") {
  const Element bs = BeamSplitter{"a", "b", "c", "d", kR, BsConvention::symmetric};
  const PureState out = oam::apply(bs, oam_basis("a", 0));
  CHECK(out.amplitude({"c", Label::oam(0)}).real() == doctest::Approx(kR));
  CHECK(out.amplitude({"d", Label::oam(0)}).imag() == doctest::Approx(kR));
}

TEST_CASE("attenuator scales amplitude and drops norm") {
  const Element at = Attenuator{"a", 0.5};
  const PureState out = oam::apply(at, oam_basis("a", 3));
  CHECK(out.amplitude({"a", Label::oam(3)}).real() == doctest::Approx(0.5));
  CHECK(out.norm2() == doctest::Approx(0.25));
}

TEST_CASE("attenuator leaves other paths alone") {
  const Element at = Attenuator{"a", 0.25};
  PureState in = oam_basis("b", 1);
  const PureState out = oam::apply(at, in);
  CHECK(out.norm2() == doctest::Approx(1.0));
}

TEST_CASE("oam shift moves the label") {
  const Element sh = OamShift{"a", -21};
  const PureState out = oam::apply(sh, oam_basis("a", 21));
  CHECK(out.amplitude({"a", Label::oam(0)}).real() == doctest::Approx(1.0));
}

TEST_CASE("oam shift on polarization amplitude is a kind mismatch") {
  const Element sh = OamShift{"a", 1};
  PureState s;
  s.add({"a", Label::v()}, Complex(1, 0));
  CHECK_THROWS_AS(oam::apply(sh, s), SemanticError);
}

TEST_CASE("shift up then down is the identity") {
  SplitMix64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const int d = static_cast<int>(rng.next_below(9)) - 4;
    PureState in;
    for (int l = -3; l <= 3; ++l) {
      in.add({"a", Label::oam(l)}, Complex(rng.next_double() - 0.5, rng.next_double()));
    }
    const PureState out =
        oam::apply(OamShift{"a", -d}, oam::apply(OamShift{"a", d}, in));
    for (const auto& [m, a] : in.amplitudes()) {
      CHECK(std::abs(out.amplitude(m) - a) < 1e-12);
    }
  }
}

TEST_CASE("sorter routes by label, keeps the label, rejects the rest") {
  const Element so = Sorter{"in", {{Label::oam(2), "p2"}, {Label::oam(5), "p5"}}, "rej"};
  PureState in;
  in.add({"in", Label::oam(2)}, Complex(kR, 0));
  in.add({"in", Label::oam(5)}, Complex(kR, 0));
  in.add({"in", Label::oam(7)}, Complex(0, 0.1));
  const PureState out = oam::apply(so, in);
  CHECK(out.amplitude({"p2", Label::oam(2)}).real() == doctest::Approx(kR));
  CHECK(out.amplitude({"p5", Label::oam(5)}).real() == doctest::Approx(kR));
  CHECK(out.amplitude({"rej", Label::oam(7)}).imag() == doctest::Approx(0.1));
}

TEST_CASE("sorter then merge-back is the identity on table labels") {
  const std::map<Label, PathId> table{{Label::oam(1), "p1"}, {Label::oam(4), "p4"}};
  const Element so = Sorter{"in", table, "rej"};
  PureState in;
  in.add({"in", Label::oam(1)}, Complex(0.6, 0.1));
  in.add({"in", Label::oam(4)}, Complex(-0.3, 0.7));
  const PureState out = oam::apply(so, in);
  // Inverse routing: gather every table output back onto the input path.
  PureState merged;
  for (const auto& [m, a] : out.amplitudes()) {
    merged.add({"in", m.label}, a);
  }
  for (const auto& [m, a] : in.amplitudes()) {
    CHECK(std::abs(merged.amplitude(m) - a) < 1e-15);
  }
}

TEST_CASE("half-wave plates rotate to the diagonals") {
  PureState v;
  v.add({"a", Label::v()}, Complex(1, 0));

  const PureState plus = oam::apply(half_wave_plate("a", Diagonal::plus45), v);
  CHECK(plus.amplitude({"a", Label::h()}).real() == doctest::Approx(kR));
  CHECK(plus.amplitude({"a", Label::v()}).real() == doctest::Approx(kR));

  const PureState minus = oam::apply(half_wave_plate("a", Diagonal::minus45), v);
  CHECK(minus.amplitude({"a", Label::h()}).real() == doctest::Approx(-kR));
  CHECK(minus.amplitude({"a", Label::v()}).real() == doctest::Approx(kR));

  const PureState twice =
      oam::apply(half_wave_plate("a", Diagonal::plus45),
            oam::apply(half_wave_plate("a", Diagonal::plus45), v));
  CHECK(std::abs(twice.amplitude({"a", Label::h()})) == doctest::Approx(1.0));
  CHECK(std::abs(twice.amplitude({"a", Label::v()})) < 1e-12);
}

TEST_CASE("label unitary ignores other labels of the same kind") {
  const Mat2 swap{Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)};
  const Element lu = LabelUnitary{"a", Label::oam(1), Label::oam(2), swap};
  PureState in;
  in.add({"a", Label::oam(1)}, Complex(0.5, 0));
  in.add({"a", Label::oam(7)}, Complex(0.25, 0));
  const PureState out = oam::apply(lu, in);
  CHECK(out.amplitude({"a", Label::oam(2)}).real() == doctest::Approx(0.5));
  CHECK(out.amplitude({"a", Label::oam(7)}).real() == doctest::Approx(0.25));
}

TEST_CASE("label unitary kind mismatch") {
  const Mat2 id{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
  const Element lu = LabelUnitary{"a", Label::h(), Label::v(), id};
  CHECK_THROWS_AS(oam::apply(lu, oam_basis("a", 3)), SemanticError);
}

TEST_CASE("norm preservation for every non-attenuating element") {
  SplitMix64 rng(31);
  PureState in;
  for (int l = -2; l <= 2; ++l) {
    in.add({"a", Label::oam(l)}, Complex(rng.next_double() - 0.5, rng.next_double()));
    in.add({"b", Label::oam(l)}, Complex(rng.next_double(), rng.next_double() - 0.5));
  }
  const std::vector<Element> elements{
      BeamSplitter{"a", "b", "c", "d", 0.3, BsConvention::hadamard},
      PhaseShift{"a", 1.234},
      OamShift{"a", 3},
      Sorter{"a",
             {{Label::oam(-2), "p0"}, {Label::oam(-1), "p1"}, {Label::oam(0), "p2"},
              {Label::oam(1), "p3"}, {Label::oam(2), "p4"}},
             "rej"},
  };
  for (const Element& e : elements) {
    CHECK(std::abs(oam::apply(e, in).norm2() - in.norm2()) < 1e-12);
  }
}

TEST_CASE("two-detector polarization interferometer ground truth") {
  // V in -> C and D equally likely; +45 in -> C always, D never.
  Circuit c;
  c.add_source("in");
  c.add_element(Sorter{"in", {{Label::v(), "top"}, {Label::h(), "bot"}}, "rej"});
  c.add_element(half_wave_plate("top", Diagonal::plus45));
  c.add_element(half_wave_plate("bot", Diagonal::minus45));
  c.add_element(BeamSplitter{"top", "bot", "c", "d", kR, BsConvention::hadamard});
  c.add_detector("C", "c");
  c.add_detector("D", "d");

  auto probe = [&](const PureState& in) {
    const PureState out = simulate(c, in);
    const double pc = port_state(out, "c").norm2();
    const double pd = port_state(out, "d").norm2();
    return std::pair<double, double>(pc, pd);
  };

  PureState v;
  v.add({"in", Label::v()}, Complex(1, 0));
  auto [pcv, pdv] = probe(v);
  CHECK(pcv == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pdv == doctest::Approx(0.5).epsilon(1e-12));

  PureState diag;
  diag.add({"in", Label::h()}, Complex(kR, 0));
  diag.add({"in", Label::v()}, Complex(kR, 0));
  auto [pcd, pdd] = probe(diag);
  CHECK(pcd == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pdd < 1e-12);
}
