#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "oam/engine.hpp"
#include "oam/rng.hpp"

namespace oam {

// Probability per named outcome plus the unobserved remainder (sorter
// rejects, attenuation, undetected ports).
struct Distribution {
  std::map<std::string, double> p;
  double loss = 0;

  double total() const;
  void validate(double tol = 1e-9) const;  // all >= 0, sum + loss == 1
};

// Sampled counts. Losses are tallied separately so counts + lost == trials
// reconciles exactly.
struct CountTable {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::uint64_t lost = 0;

  std::uint64_t counted() const;
};

// Per-detector firing probability: sum over the labels present at the
// detector's path of |amplitude|^2 (bucket detectors are label-blind).
Distribution probabilities(const Circuit& circuit, const PureState& input);

// Multinomial sampling, one independent RNG stream per trial (stream index =
// trial index), so results are bit-identical for a fixed seed regardless of
// batching.
CountTable sample(const Distribution& dist, std::uint64_t seed, std::uint64_t trials);

// Joint two-photon statistics: slot A evolves through circuit_a, slot B
// through circuit_b, then detector pairs are read out. Outcome names are
// "<a>|<b>" with "loss" standing in for either side's unobserved amplitude;
// probability that cannot be attributed to either side (attenuation of the
// joint amplitude) lands on "loss|loss".
Distribution coincidence_probabilities(const Circuit& circuit_a,
                                       const Circuit& circuit_b,
                                       const TwoPhotonState& joint);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
};

// Pearson statistic. Outcomes with expected count below 5 are pooled into one
// cell; dof = cells - 1. Throws Error when the table degenerates to a single
// cell. An observed event in a zero-probability cell yields an infinite
// statistic.
ChiSquare chi_square(const CountTable& observed, const Distribution& expected);

// Upper quantile of the chi-square distribution: the threshold t with
// P(X > t) = alpha for the given dof.
double chi_square_threshold(int dof, double alpha);

}  // namespace oam
