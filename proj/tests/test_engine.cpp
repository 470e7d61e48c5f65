#include <doctest.h>

#include <cmath>

#include "oam/builders.hpp"
#include "support/random_circuits.hpp"

using namespace oam;

TEST_CASE("empty circuit returns the input unchanged") {
  Circuit c;
  c.add_source("a");
  PureState in;
  in.add({"a", Label::oam(3)}, Complex(0.6, 0.8));
  const PureState out = simulate(c, in);
  CHECK(out.amplitude({"a", Label::oam(3)}) == Complex(0.6, 0.8));
}

TEST_CASE("input off the source ports is rejected") {
  Circuit c;
  c.add_source("a");
  PureState in;
  in.add({"nope", Label::oam(0)}, Complex(1, 0));
  CHECK_THROWS_AS(simulate(c, in), SemanticError);
}

TEST_CASE("transfer matrix of the identity circuit is the identity") {
  Circuit c;
  c.add_source("a");
  const auto basis = source_modes("a", {Label::oam(-1), Label::oam(0), Label::oam(1)});
  const TransferMatrix tm = transfer_matrix(c, basis);
  CHECK(tm.m.rows() == 3);
  CHECK((tm.m - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("transfer matrix of one hadamard splitter") {
  Circuit c;
  c.add_source("a");
  c.add_source("b");
  c.add_element(BeamSplitter{"a", "b", "c", "d", 0.70710678118654752,
                             BsConvention::hadamard});
  const std::vector<Mode> basis{{"a", Label::oam(0)}, {"b", Label::oam(0)}};
  const TransferMatrix tm = transfer_matrix(c, basis);
  const double r = 0.70710678118654752;
  CHECK(std::abs(tm.m(tm.row_of({"c", Label::oam(0)}), 0) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(tm.m(tm.row_of({"d", Label::oam(0)}), 1) - Complex(-r, 0)) < 1e-15);
}

TEST_CASE("cd-tree detector projectors match the stated bras") {
  const auto tree = build_cd_tree(SequenceSpec::fibonacci(2, 55), IndexParity::even);
  const auto basis = [&] {
    std::vector<Mode> b;
    for (int k : tree.chain) b.push_back({tree.source, Label::oam(tree.seq.term(k))});
    return b;
  }();
  const auto projectors = detector_projectors(tree.circuit, basis);
  const int k = tree.interferometers.front();
  const PureState& d_bra = projectors.at("D_" + std::to_string(k));
  // (<F_k| - <F_{k-2}|)/2: POVM weight 1/2 on the normalized difference state.
  CHECK(d_bra.amplitude({tree.source, Label::oam(tree.seq.term(k))}).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d_bra.amplitude({tree.source, Label::oam(tree.seq.term(k - 2))}).real() ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(d_bra.norm() == doctest::Approx(0.70710678118654752).epsilon(1e-12));
}

TEST_CASE("check_isometry flags attenuation with the right defect") {
  Circuit c;
  c.add_source("a");
  c.add_element(Attenuator{"a", 0.5});
  const auto basis = source_modes("a", {Label::oam(0)});
  // Column norm^2 = 1/4, so |M^H M - I| = 3/4 on that column.
  CHECK(check_isometry(c, basis) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("lossless element compositions are isometries") {
  Circuit c;
  c.add_source("a");
  c.add_source("b");
  c.add_element(BeamSplitter{"a", "b", "c", "d", 0.6, BsConvention::symmetric});
  c.add_element(PhaseShift{"c", 0.7});
  c.add_element(OamShift{"d", 2});
  c.add_element(Sorter{"c", {{Label::oam(0), "s0"}, {Label::oam(1), "s1"}}, "rej"});
  const auto basis = source_modes("a", {Label::oam(0), Label::oam(1)});
  CHECK(check_isometry(c, basis) < 1e-12);
}

TEST_CASE("empty circuit has zero isometry defect") {
  Circuit c;
  c.add_source("a");
  CHECK(check_isometry(c, source_modes("a", {Label::oam(0)})) == 0.0);
}

TEST_CASE("simulate is linear") {
  const auto rc = testing::random_circuit(7);
  const PureState x = testing::random_input(rc, 1);
  const PureState y = testing::random_input(rc, 2);
  const Complex a(0.3, -0.4), b(-0.2, 0.9);
  PureState lhs_in = a * x;
  lhs_in += b * y;
  const PureState lhs = simulate(rc.circuit, lhs_in);
  PureState rhs = a * simulate(rc.circuit, x);
  rhs += b * simulate(rc.circuit, y);
  for (const auto& [m, amp] : rhs.amplitudes()) {
    CHECK(std::abs(lhs.amplitude(m) - amp) < 1e-12);
  }
}

TEST_CASE("oracle equivalence on random circuits") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rc = testing::random_circuit(seed);
    const PureState in = testing::random_input(rc, seed);
    std::vector<Mode> basis;
    for (const auto& [m, a] : in.amplitudes()) basis.push_back(m);
    const TransferMatrix tm = transfer_matrix(rc.circuit, basis);
    const PureState dense = tm.propagate(in);
    const PureState sparse = simulate(rc.circuit, in);
    double dev = 0;
    for (const auto& [m, a] : dense.amplitudes()) {
      dev = std::max(dev, std::abs(a - sparse.amplitude(m)));
    }
    for (const auto& [m, a] : sparse.amplitudes()) {
      dev = std::max(dev, std::abs(a - dense.amplitude(m)));
    }
    CHECK(dev < 1e-10);
    if (rc.lossless) CHECK(check_isometry(rc.circuit, basis) < 1e-10);
  }
}

TEST_CASE("probability conservation on random circuits") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto rc = testing::random_circuit(seed);
    // Detect every terminal port so nothing is untracked except attenuation.
    int extra = 0;
    for (const PathId& p : rc.circuit.terminal_ports()) {
      if (rc.circuit.detector_name_for(p).empty()) {
        rc.circuit.add_detector("x" + std::to_string(extra++), p);
      }
    }
    const PureState in = testing::random_input(rc, seed);
    const PureState out = simulate(rc.circuit, in);
    if (rc.lossless) {
      CHECK(out.norm2() == doctest::Approx(in.norm2()).epsilon(1e-10));
    } else {
      CHECK(out.norm2() <= in.norm2() + 1e-10);
    }
  }
}

TEST_CASE("multi-label detector ports make projectors non-rank-one") {
  Circuit c;
  c.add_source("a");
  c.add_detector("X", "a");
  const auto basis = source_modes("a", {Label::oam(0), Label::oam(1)});
  CHECK_THROWS_AS(detector_projectors(c, basis), Error);
  const auto rows = detector_rows(c, basis);
  CHECK(rows.at("X").size() == 2);
}
