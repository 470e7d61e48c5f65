#include <doctest.h>

#include <cmath>

#include "oam/walk.hpp"

using namespace oam;

TEST_CASE("walk stage is unitary") {
  const WalkStage stage = build_walk_stage(12);
  std::vector<Mode> basis;
  for (int b = 0; b < stage.bonds(); ++b) {
    basis.push_back({stage.in_c(b), Label::oam(0)});
    basis.push_back({stage.in_d(b), Label::oam(0)});
  }
  CHECK(check_isometry(stage.circuit, basis) < 1e-12);
}

TEST_CASE("injection from an interior site spreads 1/4 onto four C/D modes") {
  const WalkStage stage = build_walk_stage(9);
  const WalkState ws = walk_start(stage, 4);
  CHECK(ws.state.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& [m, a] : ws.state.amplitudes()) {
    CHECK(std::norm(a) == doctest::Approx(0.25).epsilon(1e-12));
  }
  CHECK(ws.state.size() == 4);
}

TEST_CASE("injection matches the C/D tree detector amplitudes") {
  // The tree over one parity chain and the walk stage share their geometry:
  // |F_n> spreads with amplitudes (1/2, 1/2) below and (1/2, -1/2) above.
  const auto seq = SequenceSpec::fibonacci(1, 400);
  const auto tree = build_cd_tree(seq, IndexParity::odd);  // indices 1,3,5,7,9,11
  const int n = 5;  // interior spoke, chain position 2
  const PureState in = make_named_state(StateFamily::F, n, seq, tree.source);
  const PureState out = simulate(tree.circuit, in);
  const auto amp = [&](const std::string& det) {
    return out.amplitude({tree.circuit.detector_port(det), Label::oam(0)});
  };
  CHECK(std::abs(amp("C_5") - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(amp("D_5") - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(amp("C_7") - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(amp("D_7") - Complex(-0.5, 0)) < 1e-12);

  const WalkStage stage = build_walk_stage(seq, IndexParity::odd);
  CHECK(stage.sites == 7);  // odd indices 1..13 for the [1, 400] window
  const WalkState ws = walk_start(stage, 2);
  // Bond 1 couples sites 1,2 (indices 3,5): the "C_5/D_5" pair.
  CHECK(std::abs(ws.state.amplitude({stage.in_c(1), Label::oam(0)}) -
                 Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(ws.state.amplitude({stage.in_d(1), Label::oam(0)}) -
                 Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(ws.state.amplitude({stage.in_c(2), Label::oam(0)}) -
                 Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(ws.state.amplitude({stage.in_d(2), Label::oam(0)}) -
                 Complex(-0.5, 0)) < 1e-12);
}

TEST_CASE("coherent steps conserve norm and stay on the chain's ports") {
  const WalkStage stage = build_walk_stage(21);
  WalkState ws = walk_start(stage, 10);
  for (int t = 0; t < 15; ++t) {
    ws = walk_step(ws, stage);
    CHECK(ws.state.norm2() == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& [m, a] : ws.state.amplitudes()) {
      CHECK(m.label == Label::oam(0));
      CHECK((m.path.rfind("ic", 0) == 0 || m.path.rfind("id", 0) == 0));
    }
  }
  CHECK(ws.step == 16);
}

TEST_CASE("zero steps return the point distribution at the start") {
  const WalkStage stage = build_walk_stage(11);
  const WalkRun run = run_walk(stage, 5, 0, false);
  REQUIRE(run.per_step.size() == 1);
  CHECK(run.per_step[0].at(10) == doctest::Approx(1.0));
  CHECK(run.variance[0] == 0.0);
}

TEST_CASE("measured walk diffuses at the classical oracle's slope") {
  const int sites = 81, start = 40, steps = 40;
  const WalkStage stage = build_walk_stage(sites);
  const WalkRun run = run_walk(stage, start, steps, true);
  const auto classical = classical_walk_variance(sites, start, steps);
  REQUIRE(run.variance.size() == classical.size());
  // Same injection, then identical linear growth.
  for (std::size_t t = 1; t < run.variance.size(); ++t) {
    CHECK(run.variance[t] == doctest::Approx(classical[t]).epsilon(1e-9));
  }
}

TEST_CASE("coherent walk spreads ballistically past the classical walk") {
  const int sites = 81, start = 40, steps = 20;
  const WalkStage stage = build_walk_stage(sites);
  const WalkRun run = run_walk(stage, start, steps, false);
  const auto classical = classical_walk_variance(sites, start, steps);
  for (std::size_t t = 8; t <= static_cast<std::size_t>(steps); ++t) {
    CHECK(run.variance[t] > classical[t]);
  }
}

TEST_CASE("two-photon walk factorizes for product inputs") {
  const WalkStage stage = build_walk_stage(13);
  const WalkState a = walk_start(stage, 6);
  const WalkState b = walk_start(stage, 4);
  TwoPhotonState joint;
  for (const auto& [ma, aa] : a.state.amplitudes()) {
    for (const auto& [mb, ab] : b.state.amplitudes()) joint.add(ma, mb, aa * ab);
  }
  auto step_slot = [&](const Mode& m) {
    return simulate(stage.circuit, PureState::basis(m));
  };
  TwoPhotonState evolved = joint.map_slot(0, step_slot);
  evolved = evolved.map_slot(1, step_slot);

  const PureState ea = simulate(stage.circuit, a.state);
  const PureState eb = simulate(stage.circuit, b.state);
  for (const auto& [key, amp] : evolved.amplitudes()) {
    CHECK(std::abs(amp - ea.amplitude(key.first) * eb.amplitude(key.second)) < 1e-12);
  }
  CHECK(evolved.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("edge injection reflects instead of leaking") {
  const WalkStage stage = build_walk_stage(7);
  const WalkState ws = walk_start(stage, 0);
  CHECK(ws.state.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  WalkState next = walk_step(ws, stage);
  CHECK(next.state.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}
