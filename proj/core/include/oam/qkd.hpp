#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oam/builders.hpp"
#include "oam/measurement.hpp"

namespace oam {

enum class Basis { L, D };
std::string to_string(Basis b);

enum class EveKind {
  none,
  intercept_resend_L,
  intercept_resend_D,
  intercept_resend_random,
};
std::string to_string(EveKind k);
std::optional<EveKind> eve_kind_from_string(const std::string& s);

struct EveModel {
  EveKind kind = EveKind::none;
  double probability = 0;  // per-trial interception probability
};

struct ProtocolConfig {
  int m0 = 5;      // first pump index; photons carry indices m0-2 .. m0+N-2
  int window = 8;  // N, the number of pump indices
  SequenceSpec seq = SequenceSpec::fibonacci(1, 400);
  std::uint64_t trials = 10000;
  double basis_probability = 0.5;  // P(choose the L analyzer)
  EveModel eve;
  std::uint64_t seed = 0;
  double alpha = 0.001;  // tamper-test significance

  std::vector<int> photon_indices() const;  // m0-2 .. m0+N-2
  void validate() const;                    // throws ConfigError
};

struct TrialRecord {
  std::uint64_t trial = 0;
  Basis alice_basis = Basis::L;
  Basis bob_basis = Basis::L;
  std::string alice_outcome;
  std::string bob_outcome;
  bool kept = false;
  // Window-relative key symbols; meaningful only on kept trials and only for
  // the side whose outcome carries one.
  int alice_symbol = 0;
  int bob_symbol = 0;
  bool agree = false;
};

// The post-filter source state: sum over the pump window of
// |F_{n-1}>_A |F_{n-2}>_B + |F_{n-2}>_A |F_{n-1}>_B, normalized.
TwoPhotonState generate_pair(const ProtocolConfig& config, const PathId& a_port,
                             const PathId& b_port);

// Intercept-resend channel acting on the photon bound for Bob (slot B): with
// the model's probability Eve measures in her basis and resends the detection
// state she observed.
TwoPhotonState eve_channel(const EveModel& model, const TwoPhotonState& state,
                           SplitMix64& rng, const LAnalyzer& l_analyzer,
                           const DAnalyzer& d_analyzer);

enum class Verdict { clean, tampered };
std::string to_string(Verdict v);

struct DetectionReport {
  Verdict verdict = Verdict::clean;
  double alpha = 0;
  std::map<std::string, ChiSquare> per_table;
  std::map<std::string, double> thresholds;
};

// Chi-square per basis-pair table against the no-eavesdropper expectation;
// tampered when any statistic exceeds its (dof, alpha) threshold.
DetectionReport detect_eavesdropper(const std::map<std::string, CountTable>& stats,
                                    const std::map<std::string, Distribution>& expected,
                                    double alpha);

struct ProtocolResult {
  std::vector<TrialRecord> transcript;
  std::vector<int> alice_key;  // symbols from kept trials, in trial order
  std::vector<int> bob_key;
  std::map<std::string, CountTable> stats;        // keys "LL","LD","DL","DD"
  std::map<std::string, Distribution> expected;   // no-eve oracle per basis pair
  std::uint64_t kept = 0;
  double key_agreement = 1.0;  // fraction of kept trials passing the relation
  double source_retention = 0; // Fibonacci fraction of the label window
  DetectionReport detection;
};

// Runs the full protocol: per trial, draw the pair, pass it through Eve's
// channel, let both parties pick analyzers at random, sample the coincidence
// outcome, sift, extract symbols. Deterministic for a fixed config and seed.
ProtocolResult run_protocol(const ProtocolConfig& config);

}  // namespace oam
