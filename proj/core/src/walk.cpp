#include "oam/walk.hpp"

#include <cmath>

namespace oam {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Mode bond_mode(const PathId& port) { return Mode{port, Label::oam(0)}; }

}  // namespace

PathId WalkStage::in_c(int bond) const { return "ic" + std::to_string(bond); }
PathId WalkStage::in_d(int bond) const { return "id" + std::to_string(bond); }
PathId WalkStage::out_c(int bond) const { return "oc" + std::to_string(bond); }
PathId WalkStage::out_d(int bond) const { return "od" + std::to_string(bond); }

WalkStage build_walk_stage(int sites) {
  if (sites < 3) throw BuildError("walk chain needs at least 3 sites");
  WalkStage stage;
  stage.sites = sites;
  Circuit& c = stage.circuit;
  const int nb = sites - 1;

  for (int b = 0; b < nb; ++b) {
    c.add_source(stage.in_c(b));
    c.add_source(stage.in_d(b));
  }
  // Expansion: symmetric splitters send each bond's pair out as two arms.
  std::vector<PathId> arm_up(nb), arm_dn(nb);
  for (int b = 0; b < nb; ++b) {
    arm_up[b] = "au" + std::to_string(b);
    arm_dn[b] = "ad" + std::to_string(b);
    c.add_element(BeamSplitter{stage.in_c(b), stage.in_d(b), arm_up[b], arm_dn[b],
                               kInvSqrt2, BsConvention::symmetric});
  }
  // Site mixing: the arm from below meets the arm from above; edge sites
  // reflect their single arm.
  std::vector<PathId> toward_lower(sites), toward_upper(sites);
  for (int n = 0; n < sites; ++n) {
    const bool has_below = n >= 1;
    const bool has_above = n <= sites - 2;
    if (has_below && has_above) {
      toward_lower[n] = "p" + std::to_string(n);
      toward_upper[n] = "q" + std::to_string(n);
      c.add_element(BeamSplitter{arm_up[n - 1], arm_dn[n], toward_lower[n],
                                 toward_upper[n], kInvSqrt2, BsConvention::hadamard});
    } else if (has_above) {
      toward_upper[n] = arm_dn[n];  // bottom edge: the arm routes back
    } else {
      toward_lower[n] = arm_up[n - 1];  // top edge
    }
  }
  // Recombination into the next stage's bond pairs.
  for (int b = 0; b < nb; ++b) {
    c.add_element(BeamSplitter{toward_lower[b + 1], toward_upper[b], stage.out_c(b),
                               stage.out_d(b), kInvSqrt2, BsConvention::hadamard});
  }
  return stage;
}

WalkStage build_walk_stage(const SequenceSpec& seq, IndexParity parity) {
  int sites = 0;
  for (int n : seq.indices_in_range()) {
    const bool even = n % 2 == 0;
    if ((parity == IndexParity::even) == even) ++sites;
  }
  return build_walk_stage(sites);
}

WalkState walk_start(const WalkStage& stage, int site) {
  if (site < 0 || site >= stage.sites) throw Error("walk start site out of range");
  WalkState ws;
  ws.sites = stage.sites;
  ws.step = 1;
  const int nb = stage.bonds();
  // Coin at the start site, then the recombination layer.
  double toward_lower = kInvSqrt2, toward_upper = kInvSqrt2;
  if (site == 0) {
    toward_lower = 0;
    toward_upper = 1;
  } else if (site == stage.sites - 1) {
    toward_lower = 1;
    toward_upper = 0;
  }
  if (site - 1 >= 0 && toward_lower != 0) {
    // Enters bond site-1 from its upper site.
    ws.state.add(bond_mode(stage.in_c(site - 1)), Complex(toward_lower * kInvSqrt2, 0));
    ws.state.add(bond_mode(stage.in_d(site - 1)), Complex(toward_lower * kInvSqrt2, 0));
  }
  if (site < nb && toward_upper != 0) {
    // Enters bond site from its lower site.
    ws.state.add(bond_mode(stage.in_c(site)), Complex(toward_upper * kInvSqrt2, 0));
    ws.state.add(bond_mode(stage.in_d(site)), Complex(-toward_upper * kInvSqrt2, 0));
  }
  return ws;
}

WalkState walk_step(const WalkState& state, const WalkStage& stage) {
  if (state.sites != stage.sites) throw Error("walk state does not match the stage");
  const PureState out = simulate(stage.circuit, state.state);
  WalkState next;
  next.sites = state.sites;
  next.step = state.step + 1;
  for (int b = 0; b < stage.bonds(); ++b) {
    const Complex cc = out.amplitude(bond_mode(stage.out_c(b)));
    const Complex dd = out.amplitude(bond_mode(stage.out_d(b)));
    if (cc != Complex{}) next.state.add(bond_mode(stage.in_c(b)), cc);
    if (dd != Complex{}) next.state.add(bond_mode(stage.in_d(b)), dd);
  }
  return next;
}

namespace {

std::map<int, double> bond_distribution(const WalkStage& stage, const PureState& s) {
  std::map<int, double> out;
  for (int b = 0; b < stage.bonds(); ++b) {
    const double pr = std::norm(s.amplitude(bond_mode(stage.in_c(b)))) +
                      std::norm(s.amplitude(bond_mode(stage.in_d(b))));
    if (pr > 0) out[2 * b + 1] = pr;
  }
  return out;
}

double variance_of(const std::map<int, double>& dist) {
  double total = 0, mean = 0;
  for (const auto& [x, p] : dist) {
    total += p;
    mean += p * x;
  }
  if (total <= 0) return 0;
  mean /= total;
  double var = 0;
  for (const auto& [x, p] : dist) var += p / total * (x - mean) * (x - mean);
  return var;
}

}  // namespace

WalkRun run_walk(const WalkStage& stage, int start_site, int steps, bool measure_each) {
  WalkRun run;
  run.per_step.push_back({{2 * start_site, 1.0}});
  run.variance.push_back(0.0);
  if (steps == 0) return run;

  WalkState ws = walk_start(stage, start_site);
  if (!measure_each) {
    for (int t = 1; t <= steps; ++t) {
      if (t > 1) ws = walk_step(ws, stage);
      run.per_step.push_back(bond_distribution(stage, ws.state));
      run.variance.push_back(variance_of(run.per_step.back()));
    }
    return run;
  }

  // Measured walk: the node (bond and port) collapses each step, so the
  // distribution evolves with the stage's per-node transition probabilities,
  // taken from the dense oracle.
  const int nb = stage.bonds();
  std::vector<Mode> in_basis;
  for (int b = 0; b < nb; ++b) {
    in_basis.push_back(bond_mode(stage.in_c(b)));
    in_basis.push_back(bond_mode(stage.in_d(b)));
  }
  const TransferMatrix tm = transfer_matrix(stage.circuit, in_basis);
  auto out_index = [&](int b, bool d_port) {
    return tm.row_of(bond_mode(d_port ? stage.out_d(b) : stage.out_c(b)));
  };
  auto in_index = [&](int b, bool d_port) {
    return tm.col_of(bond_mode(d_port ? stage.in_d(b) : stage.in_c(b)));
  };

  std::vector<double> node_prob(static_cast<std::size_t>(2 * nb), 0.0);
  for (int b = 0; b < nb; ++b) {
    node_prob[static_cast<std::size_t>(2 * b)] =
        std::norm(ws.state.amplitude(bond_mode(stage.in_c(b))));
    node_prob[static_cast<std::size_t>(2 * b + 1)] =
        std::norm(ws.state.amplitude(bond_mode(stage.in_d(b))));
  }
  auto record = [&](const std::vector<double>& probs) {
    std::map<int, double> dist;
    for (int b = 0; b < nb; ++b) {
      const double pr = probs[static_cast<std::size_t>(2 * b)] +
                        probs[static_cast<std::size_t>(2 * b + 1)];
      if (pr > 0) dist[2 * b + 1] = pr;
    }
    run.per_step.push_back(dist);
    run.variance.push_back(variance_of(dist));
  };
  record(node_prob);
  for (int t = 2; t <= steps; ++t) {
    std::vector<double> next(static_cast<std::size_t>(2 * nb), 0.0);
    for (int bi = 0; bi < nb; ++bi) {
      for (int di = 0; di < 2; ++di) {
        const double p0 = node_prob[static_cast<std::size_t>(2 * bi + di)];
        if (p0 <= 0) continue;
        const Eigen::Index col = in_index(bi, di == 1);
        for (int bo = 0; bo < nb; ++bo) {
          for (int dp = 0; dp < 2; ++dp) {
            const Eigen::Index row = out_index(bo, dp == 1);
            const double w = std::norm(tm.m(row, col));
            if (w > 0) next[static_cast<std::size_t>(2 * bo + dp)] += p0 * w;
          }
        }
      }
    }
    node_prob = std::move(next);
    record(node_prob);
  }
  return run;
}

std::vector<double> classical_walk_variance(int sites, int start_site, int steps) {
  if (sites < 3) throw Error("walk chain needs at least 3 sites");
  if (start_site < 0 || start_site >= sites) throw Error("start site out of range");
  const int nb = sites - 1;
  std::vector<double> variance;
  variance.push_back(0.0);  // point at the site
  if (steps == 0) return variance;

  // The injection spreads onto the adjacent bonds.
  std::vector<double> d(static_cast<std::size_t>(nb), 0.0);
  if (start_site == 0) {
    d[0] = 1.0;
  } else if (start_site == sites - 1) {
    d[static_cast<std::size_t>(nb - 1)] = 1.0;
  } else {
    d[static_cast<std::size_t>(start_site - 1)] = 0.5;
    d[static_cast<std::size_t>(start_site)] = 0.5;
  }
  auto var_of = [&](const std::vector<double>& probs) {
    double mean = 0;
    for (int b = 0; b < nb; ++b) mean += probs[static_cast<std::size_t>(b)] * (2 * b + 1);
    double v = 0;
    for (int b = 0; b < nb; ++b) {
      const double x = 2 * b + 1 - mean;
      v += probs[static_cast<std::size_t>(b)] * x * x;
    }
    return v;
  };
  variance.push_back(var_of(d));
  for (int t = 2; t <= steps; ++t) {
    std::vector<double> next(static_cast<std::size_t>(nb), 0.0);
    for (int b = 0; b < nb; ++b) {
      const double p = d[static_cast<std::size_t>(b)];
      if (p <= 0) continue;
      next[static_cast<std::size_t>(b)] += 0.5 * p;
      if (b > 0) {
        next[static_cast<std::size_t>(b - 1)] += 0.25 * p;
      } else {
        next[0] += 0.25 * p;
      }
      if (b < nb - 1) {
        next[static_cast<std::size_t>(b + 1)] += 0.25 * p;
      } else {
        next[static_cast<std::size_t>(nb - 1)] += 0.25 * p;
      }
    }
    d = std::move(next);
    variance.push_back(var_of(d));
  }
  return variance;
}

}  // namespace oam
