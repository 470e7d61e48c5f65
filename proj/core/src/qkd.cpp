#include "oam/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oam {

std::string to_string(Basis b) { return b == Basis::L ? "L" : "D"; }

std::string to_string(EveKind k) {
  switch (k) {
    case EveKind::none: return "none";
    case EveKind::intercept_resend_L: return "intercept_resend_L";
    case EveKind::intercept_resend_D: return "intercept_resend_D";
    case EveKind::intercept_resend_random: return "intercept_resend_random";
  }
  return "?";
}

std::optional<EveKind> eve_kind_from_string(const std::string& s) {
  if (s == "none") return EveKind::none;
  if (s == "intercept_resend_L") return EveKind::intercept_resend_L;
  if (s == "intercept_resend_D") return EveKind::intercept_resend_D;
  if (s == "intercept_resend_random") return EveKind::intercept_resend_random;
  return std::nullopt;
}

std::string to_string(Verdict v) { return v == Verdict::clean ? "clean" : "tampered"; }

std::vector<int> ProtocolConfig::photon_indices() const {
  std::vector<int> out;
  for (int k = m0 - 2; k <= m0 + window - 2; ++k) out.push_back(k);
  return out;
}

void ProtocolConfig::validate() const {
  if (window < 2) throw ConfigError("window must cover at least two pump indices");
  if (m0 < 3) throw ConfigError("m0 must be >= 3 so F_{m0-2} exists");
  if (basis_probability < 0 || basis_probability > 1) {
    throw ConfigError("basis probability must lie in [0, 1]");
  }
  if (eve.probability < 0 || eve.probability > 1) {
    throw ConfigError("interception probability must lie in [0, 1]");
  }
  if (alpha <= 0 || alpha > 1) throw ConfigError("alpha must lie in (0, 1]");
  seq.validate();
  for (int k : photon_indices()) {
    const long long v = seq.term(k);
    if (!seq.in_range(v)) {
      throw ConfigError("window index " + std::to_string(k) + " (value " +
                        std::to_string(v) + ") falls outside the sequence range");
    }
  }
}

TwoPhotonState generate_pair(const ProtocolConfig& config, const PathId& a_port,
                             const PathId& b_port) {
  config.validate();
  TwoPhotonState psi;
  const double amp = 1.0 / std::sqrt(2.0 * config.window);
  for (int n = config.m0; n <= config.m0 + config.window - 1; ++n) {
    const Label hi = Label::oam(config.seq.term(n - 1));
    const Label lo = Label::oam(config.seq.term(n - 2));
    psi.add({a_port, hi}, {b_port, lo}, Complex(amp, 0));
    psi.add({a_port, lo}, {b_port, hi}, Complex(amp, 0));
  }
  return psi;
}

namespace {

PureState conjugate(const PureState& s) {
  PureState out;
  for (const auto& [m, a] : s.amplitudes()) out.add(m, std::conj(a));
  return out;
}

// Analyzer detection states over its source modes: the normalized conjugated
// projector bras, used both for Eve's collapse and her resend.
std::map<std::string, PureState> detection_states(const Circuit& circuit,
                                                  const PathId& source,
                                                  const SequenceSpec& seq,
                                                  const std::vector<int>& indices) {
  std::vector<Mode> basis;
  for (int k : indices) basis.push_back({source, Label::oam(seq.term(k))});
  std::map<std::string, PureState> out;
  for (auto& [name, bra] : detector_projectors(circuit, basis)) {
    if (bra.empty()) continue;
    out.emplace(name, conjugate(bra).normalized());
  }
  return out;
}

struct EveApparatus {
  // Detection states keyed by outcome name, per basis.
  std::map<std::string, PureState> l_states;
  std::map<std::string, PureState> d_states;

  const std::map<std::string, PureState>& states(Basis b) const {
    return b == Basis::L ? l_states : d_states;
  }
};

// Measures slot B projectively in the given basis and resends the detection
// state. Returns outcome name and the post-channel state.
std::pair<std::string, TwoPhotonState> intercept_measure_resend(
    const TwoPhotonState& state, const EveApparatus& eve, Basis basis,
    const PathId& b_port, double u) {
  const auto& states = eve.states(basis);
  // Outcome probabilities by projecting slot B onto each detection state.
  std::vector<std::pair<std::string, PureState>> collapses;
  std::vector<double> probs;
  double total = 0;
  for (const auto& [name, det] : states) {
    PureState a_side = state.project_slot(1, det);
    const double pr = a_side.norm2();
    collapses.emplace_back(name, std::move(a_side));
    probs.push_back(pr);
    total += pr;
  }
  if (total < 1e-300) throw Error("eve channel: state has no support on the analyzer");
  double acc = 0;
  std::size_t pick = collapses.size() - 1;
  for (std::size_t i = 0; i < collapses.size(); ++i) {
    acc += probs[i] / total;
    if (u < acc) {
      pick = i;
      break;
    }
  }
  const auto& [name, a_side] = collapses[pick];
  const PureState resend = states.at(name);
  TwoPhotonState out;
  const PureState a_norm = a_side.normalized();
  for (const auto& [ma, aa] : a_norm.amplitudes()) {
    for (const auto& [mb, ab] : resend.amplitudes()) {
      out.add(ma, Mode{b_port, mb.label}, aa * ab);
    }
  }
  return {name, out};
}

}  // namespace

TwoPhotonState eve_channel(const EveModel& model, const TwoPhotonState& state,
                           SplitMix64& rng, const LAnalyzer& l_analyzer,
                           const DAnalyzer& d_analyzer) {
  if (model.kind == EveKind::none || model.probability <= 0) return state;
  if (rng.next_double() >= model.probability) return state;
  EveApparatus eve;
  eve.l_states = detection_states(l_analyzer.circuit, l_analyzer.source,
                                  l_analyzer.seq, l_analyzer.indices);
  eve.d_states = detection_states(d_analyzer.circuit, d_analyzer.source,
                                  d_analyzer.seq, d_analyzer.indices);
  Basis basis = Basis::L;
  if (model.kind == EveKind::intercept_resend_D) basis = Basis::D;
  if (model.kind == EveKind::intercept_resend_random) {
    basis = rng.next_double() < 0.5 ? Basis::L : Basis::D;
  }
  const PathId b_port = state.slot_modes(1).front().path;
  return intercept_measure_resend(state, eve, basis, b_port, rng.next_double()).second;
}

namespace {

std::string pair_key(Basis a, Basis b) { return to_string(a) + to_string(b); }

// Window-relative symbol carried by an outcome name, if any: L outcomes
// "F_<k>" encode eigenstate index k; D outcomes "C_<k>" encode the
// superposition S_{k-1}.
std::optional<int> symbol_of(Basis basis, const std::string& outcome, int m0) {
  if (basis == Basis::L) {
    if (outcome.rfind("F_", 0) == 0) return std::stoi(outcome.substr(2)) - m0;
    return std::nullopt;
  }
  if (outcome.rfind("C_", 0) == 0) return std::stoi(outcome.substr(2)) - 1 - m0;
  return std::nullopt;
}

bool is_c_type(const std::string& outcome) { return outcome.rfind("C_", 0) == 0; }

struct SampledOutcome {
  std::string a, b;
};

SampledOutcome sample_pair(const Distribution& dist, double u) {
  double acc = 0;
  const std::string* last = nullptr;
  for (const auto& [name, pr] : dist.p) {
    acc += pr;
    last = &name;
    if (u < acc) break;
  }
  if (!last) throw Error("empty coincidence distribution");
  const std::size_t bar = last->find('|');
  return {last->substr(0, bar), last->substr(bar + 1)};
}

}  // namespace

DetectionReport detect_eavesdropper(const std::map<std::string, CountTable>& stats,
                                    const std::map<std::string, Distribution>& expected,
                                    double alpha) {
  DetectionReport report;
  report.alpha = alpha;
  if (alpha >= 1.0) {
    report.verdict = Verdict::tampered;
    return report;
  }
  for (const auto& [key, table] : stats) {
    if (table.trials == 0) continue;
    auto it = expected.find(key);
    if (it == expected.end()) throw Error("no expected distribution for table " + key);
    ChiSquare cs;
    try {
      cs = chi_square(table, it->second);
    } catch (const Error&) {
      continue;  // too few counts for this table to carry evidence
    }
    report.per_table[key] = cs;
    const double threshold = chi_square_threshold(cs.dof, alpha);
    report.thresholds[key] = threshold;
    if (cs.statistic > threshold) report.verdict = Verdict::tampered;
  }
  return report;
}

ProtocolResult run_protocol(const ProtocolConfig& config) {
  config.validate();
  ProtocolResult result;
  const std::vector<int> indices = config.photon_indices();
  const PathId a_port = "src";  // analyzer source port name, both sides
  const LAnalyzer l_an = build_l_analyzer(config.seq, indices);
  const DAnalyzer d_an = build_d_analyzer(config.seq, indices);
  auto circuit_for = [&](Basis b) -> const Circuit& {
    return b == Basis::L ? l_an.circuit : d_an.circuit;
  };

  const TwoPhotonState psi = generate_pair(config, a_port, a_port);

  // No-eavesdropper oracle distributions and their supports.
  std::map<std::string, Distribution> null_dist;
  std::map<std::string, std::set<std::string>> null_support;
  for (Basis a : {Basis::L, Basis::D}) {
    for (Basis b : {Basis::L, Basis::D}) {
      Distribution d = coincidence_probabilities(circuit_for(a), circuit_for(b), psi);
      std::set<std::string> support;
      for (const auto& [name, pr] : d.p) {
        if (pr > 1e-12) support.insert(name);
      }
      null_support[pair_key(a, b)] = std::move(support);
      null_dist[pair_key(a, b)] = std::move(d);
    }
  }
  result.expected = null_dist;

  // Eve's conditional states and their per-basis-pair distributions, cached
  // per (eve basis, eve outcome).
  EveApparatus eve;
  std::map<std::string, Distribution> eve_marginal;  // keyed by basis letter
  // conditional[pair_key(basis, outcome)][basis pair] -> distribution
  std::map<std::string, std::map<std::string, Distribution>> eve_conditional;
  const bool eve_active =
      config.eve.kind != EveKind::none && config.eve.probability > 0;
  if (eve_active) {
    eve.l_states = detection_states(l_an.circuit, l_an.source, l_an.seq, l_an.indices);
    eve.d_states = detection_states(d_an.circuit, d_an.source, d_an.seq, d_an.indices);
    for (Basis basis : {Basis::L, Basis::D}) {
      Distribution marginal;
      for (const auto& [name, det] : eve.states(basis)) {
        const PureState a_side = psi.project_slot(1, det);
        const double pr = a_side.norm2();
        if (pr < 1e-15) continue;
        marginal.p[name] = pr;
        // Post-channel joint state for this outcome.
        TwoPhotonState collapsed;
        const PureState a_norm = a_side.normalized();
        for (const auto& [ma, aa] : a_norm.amplitudes()) {
          for (const auto& [mb, ab] : det.amplitudes()) {
            collapsed.add(ma, Mode{a_port, mb.label}, aa * ab);
          }
        }
        std::map<std::string, Distribution> per_pair;
        for (Basis a : {Basis::L, Basis::D}) {
          for (Basis b : {Basis::L, Basis::D}) {
            per_pair[pair_key(a, b)] =
                coincidence_probabilities(circuit_for(a), circuit_for(b), collapsed);
          }
        }
        eve_conditional[to_string(basis) + ":" + name] = std::move(per_pair);
      }
      marginal.loss = 0;
      eve_marginal[to_string(basis)] = std::move(marginal);
    }
  }

  result.source_retention =
      fibonacci_fraction(config.seq.term(config.m0 - 2),
                         config.seq.term(config.m0 + config.window - 2))
          .value();

  for (const char* key : {"LL", "LD", "DL", "DD"}) {
    result.stats[key] = CountTable{};
  }

  std::uint64_t agree_count = 0;
  result.transcript.reserve(config.trials);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    SplitMix64 eve_rng = stream_for(config.seed, t, 0);
    SplitMix64 basis_rng = stream_for(config.seed, t, 1);
    SplitMix64 outcome_rng = stream_for(config.seed, t, 2);

    const std::map<std::string, Distribution>* dists = &null_dist;
    if (eve_active && eve_rng.next_double() < config.eve.probability) {
      Basis ebasis = Basis::L;
      if (config.eve.kind == EveKind::intercept_resend_D) ebasis = Basis::D;
      if (config.eve.kind == EveKind::intercept_resend_random) {
        ebasis = eve_rng.next_double() < 0.5 ? Basis::L : Basis::D;
      }
      const Distribution& marginal = eve_marginal.at(to_string(ebasis));
      const double u = eve_rng.next_double();
      double acc = 0;
      std::string outcome;
      for (const auto& [name, pr] : marginal.p) {
        acc += pr;
        outcome = name;
        if (u < acc) break;
      }
      dists = &eve_conditional.at(to_string(ebasis) + ":" + outcome);
    }

    TrialRecord rec;
    rec.trial = t;
    rec.alice_basis = basis_rng.next_double() < config.basis_probability
                          ? Basis::L
                          : Basis::D;
    rec.bob_basis = basis_rng.next_double() < config.basis_probability
                        ? Basis::L
                        : Basis::D;
    const std::string key = pair_key(rec.alice_basis, rec.bob_basis);
    const Distribution& dist = dists->at(key);
    const SampledOutcome outcome = sample_pair(dist, outcome_rng.next_double());
    rec.alice_outcome = outcome.a;
    rec.bob_outcome = outcome.b;

    CountTable& table = result.stats[key];
    ++table.trials;
    if (outcome.a == "loss" || outcome.b == "loss") {
      ++table.lost;
    } else {
      ++table.counts[outcome.a + "|" + outcome.b];
    }

    // Sifting: both-L always; a D side must have fired a C-type detector.
    const bool a_ok = rec.alice_basis == Basis::L || is_c_type(outcome.a);
    const bool b_ok = rec.bob_basis == Basis::L || is_c_type(outcome.b);
    rec.kept = a_ok && b_ok && outcome.a != "loss" && outcome.b != "loss";
    if (rec.kept) {
      const auto sa = symbol_of(rec.alice_basis, outcome.a, config.m0);
      const auto sb = symbol_of(rec.bob_basis, outcome.b, config.m0);
      rec.alice_symbol = sa.value();
      rec.bob_symbol = sb.value();
      result.alice_key.push_back(rec.alice_symbol);
      result.bob_key.push_back(rec.bob_symbol);
      ++result.kept;
      rec.agree =
          null_support.at(key).count(outcome.a + "|" + outcome.b) > 0;
      if (rec.agree) ++agree_count;
    }
    result.transcript.push_back(std::move(rec));
  }

  result.key_agreement =
      result.kept == 0 ? 1.0
                       : static_cast<double>(agree_count) /
                             static_cast<double>(result.kept);
  result.detection = detect_eavesdropper(result.stats, result.expected, config.alpha);
  return result;
}

}  // namespace oam
