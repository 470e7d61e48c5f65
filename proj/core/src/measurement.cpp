#include "oam/measurement.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>

namespace oam {

double Distribution::total() const {
  double s = 0;
  for (const auto& [k, v] : p) s += v;
  return s;
}

void Distribution::validate(double tol) const {
  for (const auto& [k, v] : p) {
    if (v < -tol) throw Error("negative probability for outcome '" + k + "'");
  }
  if (std::abs(total() + loss - 1.0) > tol) {
    throw Error("distribution does not sum to 1");
  }
}

std::uint64_t CountTable::counted() const {
  std::uint64_t s = 0;
  for (const auto& [k, v] : counts) s += v;
  return s;
}

Distribution probabilities(const Circuit& circuit, const PureState& input) {
  const PureState out = simulate(circuit, input);
  Distribution dist;
  for (const auto& [name, port] : circuit.detectors()) dist.p[name] = 0;
  double detected = 0;
  for (const auto& [mode, amp] : out.amplitudes()) {
    const std::string name = circuit.detector_name_for(mode.path);
    if (name.empty()) continue;
    const double pr = std::norm(amp);
    dist.p[name] += pr;
    detected += pr;
  }
  dist.loss = 1.0 - detected;
  if (dist.loss < 0 && dist.loss > -1e-12) dist.loss = 0;
  return dist;
}

CountTable sample(const Distribution& dist, std::uint64_t seed, std::uint64_t trials) {
  CountTable table;
  table.trials = trials;
  // Fixed outcome order (map iteration is sorted) keeps the CDF stable.
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = stream_for(seed, t);
    const double u = rng.next_double();
    double acc = 0;
    bool hit = false;
    for (const auto& [name, pr] : dist.p) {
      acc += pr;
      if (u < acc) {
        ++table.counts[name];
        hit = true;
        break;
      }
    }
    if (!hit) ++table.lost;
  }
  return table;
}

namespace {

// Outcome name for a mode after evolution: detector name or "loss".
std::string outcome_of(const Circuit& circuit, const Mode& m) {
  const std::string name = circuit.detector_name_for(m.path);
  return name.empty() ? std::string("loss") : name;
}

}  // namespace

Distribution coincidence_probabilities(const Circuit& circuit_a,
                                       const Circuit& circuit_b,
                                       const TwoPhotonState& joint) {
  // Evolve each slot by linearity, caching the image of each input mode.
  TwoPhotonState evolved = joint.map_slot(0, [&](const Mode& m) {
    return simulate(circuit_a, PureState::basis(m));
  });
  evolved = evolved.map_slot(1, [&](const Mode& m) {
    return simulate(circuit_b, PureState::basis(m));
  });

  Distribution dist;
  double attributed = 0;
  for (const auto& [key, amp] : evolved.amplitudes()) {
    const double pr = std::norm(amp);
    dist.p["" + outcome_of(circuit_a, key.first) + "|" +
           outcome_of(circuit_b, key.second)] += pr;
    attributed += pr;
  }
  // Amplitude destroyed by attenuators is not on any port anymore.
  const double missing = joint.norm2() - attributed;
  if (missing > 1e-12) dist.p["loss|loss"] += missing;
  dist.loss = 0;
  return dist;
}

ChiSquare chi_square(const CountTable& observed, const Distribution& expected) {
  if (observed.trials == 0) throw Error("chi-square needs a nonzero trial count");
  const double n = static_cast<double>(observed.trials);

  // Outcome universe: union of expected support and observed outcomes.
  std::map<std::string, std::pair<double, double>> cells;  // name -> (exp, obs)
  for (const auto& [name, pr] : expected.p) cells[name].first = pr * n;
  if (expected.loss > 0) cells["loss"].first += expected.loss * n;
  for (const auto& [name, cnt] : observed.counts) {
    cells[name].second += static_cast<double>(cnt);
  }
  if (observed.lost > 0) cells["loss"].second += static_cast<double>(observed.lost);

  double pooled_exp = 0, pooled_obs = 0;
  double statistic = 0;
  int used = 0;
  for (const auto& [name, eo] : cells) {
    const auto [e, o] = eo;
    if (e < 5.0) {
      pooled_exp += e;
      pooled_obs += o;
      continue;
    }
    statistic += (o - e) * (o - e) / e;
    ++used;
  }
  if (pooled_exp > 0 || pooled_obs > 0) {
    if (pooled_exp <= 0) {
      // Events observed where none were possible: unbounded evidence.
      return {std::numeric_limits<double>::infinity(), std::max(used, 1)};
    }
    statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++used;
  }
  if (used < 2) throw Error("chi-square is degenerate with a single outcome cell");
  return {statistic, used - 1};
}

double chi_square_threshold(int dof, double alpha) {
  if (dof < 1) throw Error("chi-square threshold needs dof >= 1");
  if (alpha <= 0) return std::numeric_limits<double>::infinity();
  if (alpha >= 1) return 0;
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace oam
