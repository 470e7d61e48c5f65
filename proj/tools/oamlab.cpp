// oamlab: build, simulate and analyze OAM interferometer netlists, run the
// Fibonacci key-distribution protocol and the L/D walk.
//
// Exit codes: 0 success, 2 netlist parse error, 3 semantic error, 4 builder
// error, 5 configuration error, 1 anything else.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>

#include "oam/builders.hpp"
#include "oam/measurement.hpp"
#include "oam/netlist.hpp"
#include "oam/qkd.hpp"
#include "oam/walk.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitBuild = 4;
constexpr int kExitConfig = 5;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OAMLAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw oam::ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw oam::ConfigError("cannot write '" + path + "'");
  out << text;
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json report_skeleton(const std::string& command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  return out;
}

oam::Complex parse_complex(const std::string& text) {
  // Forms: "1.5", "-2", "1+0.5i", "-1-1i", "2i".
  const std::string s = text;
  if (s.empty()) throw oam::ConfigError("empty coefficient");
  std::size_t pos = 0;
  auto read_num = [&]() -> double {
    const char* start = s.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw oam::ConfigError("malformed coefficient '" + text + "'");
    pos += static_cast<std::size_t>(end - start);
    return v;
  };
  const double first = read_num();
  if (pos == s.size()) return {first, 0};
  if (s[pos] == 'i' && pos + 1 == s.size()) return {0, first};
  const double second = read_num();
  if (pos + 1 == s.size() && s[pos] == 'i') return {first, second};
  throw oam::ConfigError("malformed coefficient '" + text + "'");
}

std::vector<oam::Complex> parse_complex_list(const std::string& text) {
  std::vector<oam::Complex> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_complex(tok));
  }
  return out;
}

oam::SequenceSpec sequence_from_flags(const std::string& kind, const std::string& range) {
  const auto vals = parse_int_list(range);
  if (vals.size() != 2) throw oam::ConfigError("--range needs min,max");
  if (kind == "fibonacci") return oam::SequenceSpec::fibonacci(vals[0], vals[1]);
  if (kind == "lucas") return oam::SequenceSpec::lucas(vals[0], vals[1]);
  if (kind == "tribonacci") return oam::SequenceSpec::tribonacci(vals[0], vals[1]);
  throw oam::ConfigError("unknown sequence kind '" + kind + "'");
}

// Input specs: "F:7" | "S:7" | "C:6" | "D:8" (family over the sequence),
// "val:13" (one OAM value), "pol:H|V|+45|-45", "list:2=0.707,5=-0.707".
oam::PureState parse_input_spec(const std::string& spec, const oam::PathId& port,
                                const oam::SequenceSpec& seq) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw oam::ConfigError("input spec needs a prefix, e.g. S:7 or pol:V");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  using oam::Complex;
  using oam::Label;
  using oam::Mode;
  oam::PureState state;
  if (kind == "F" || kind == "S" || kind == "C" || kind == "D") {
    const oam::StateFamily fam = kind == "F"   ? oam::StateFamily::F
                                 : kind == "S" ? oam::StateFamily::S
                                 : kind == "C" ? oam::StateFamily::C
                                               : oam::StateFamily::D;
    return oam::make_named_state(fam, std::stoi(arg), seq, port);
  }
  if (kind == "val") {
    state.add(Mode{port, Label::oam(std::stoll(arg))}, Complex(1, 0));
    return state;
  }
  if (kind == "pol") {
    const double r = 1.0 / std::sqrt(2.0);
    if (arg == "H") {
      state.add(Mode{port, Label::h()}, Complex(1, 0));
    } else if (arg == "V") {
      state.add(Mode{port, Label::v()}, Complex(1, 0));
    } else if (arg == "+45") {
      state.add(Mode{port, Label::h()}, Complex(r, 0));
      state.add(Mode{port, Label::v()}, Complex(r, 0));
    } else if (arg == "-45") {
      state.add(Mode{port, Label::v()}, Complex(r, 0));
      state.add(Mode{port, Label::h()}, Complex(-r, 0));
    } else {
      throw oam::ConfigError("unknown polarization '" + arg + "'");
    }
    return state;
  }
  if (kind == "list") {
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::size_t eq = tok.find('=');
      if (eq == std::string::npos) {
        throw oam::ConfigError("list entries look like <label>=<amplitude>");
      }
      const auto label = Label::parse(tok.substr(0, eq));
      if (!label) throw oam::ConfigError("bad label '" + tok.substr(0, eq) + "'");
      state.add(Mode{port, *label}, parse_complex(tok.substr(eq + 1)));
    }
    if (state.empty()) throw oam::ConfigError("empty amplitude list");
    return state;
  }
  throw oam::ConfigError("unknown input spec kind '" + kind + "'");
}

oam::PathId pick_source(const oam::Circuit& circuit, const std::string& flag) {
  if (!flag.empty()) {
    if (!circuit.is_source(flag)) {
      throw oam::ConfigError("'" + flag + "' is not a source port");
    }
    return flag;
  }
  for (const auto& s : circuit.sources()) {
    if (s == "src" || s == "in") return s;
  }
  if (circuit.sources().size() == 1) return circuit.sources().front();
  throw oam::ConfigError("circuit has several sources; pick one with --port");
}

json distribution_json(const oam::Distribution& dist) {
  json j;
  json probs = json::object();
  for (const auto& [name, p] : dist.p) probs[name] = p;
  j["probabilities"] = probs;
  j["loss"] = dist.loss;
  return j;
}

std::string distribution_csv(const oam::Distribution& dist) {
  std::ostringstream out;
  out << "outcome,probability\n";
  for (const auto& [name, p] : dist.p) out << name << "," << p << "\n";
  out << "loss," << dist.loss << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& netlist_path, const std::string& input_spec,
                 const std::string& port_flag, const std::string& seq_kind,
                 const std::string& range, bool csv, bool with_oracle,
                 const std::string& out_path) {
  Stopwatch clock;
  const oam::Circuit circuit = oam::parse_netlist(read_file(netlist_path));
  const oam::SequenceSpec seq = sequence_from_flags(seq_kind, range);
  const oam::PathId port = pick_source(circuit, port_flag);
  const oam::PureState input = parse_input_spec(input_spec, port, seq);
  const oam::Distribution dist = oam::probabilities(circuit, input);

  json report = report_skeleton("simulate");
  report["config"] = {{"netlist", netlist_path},
                      {"input", input_spec},
                      {"port", port},
                      {"sequence", oam::to_string(seq.kind)}};
  report["results"] = distribution_json(dist);
  if (with_oracle) {
    std::vector<oam::Mode> basis;
    for (const auto& [m, a] : input.amplitudes()) basis.push_back(m);
    const oam::TransferMatrix tm = oam::transfer_matrix(circuit, basis);
    const oam::PureState dense = tm.propagate(input);
    const oam::PureState sparse = oam::simulate(circuit, input);
    double dev = 0;
    for (const auto& [m, a] : dense.amplitudes()) {
      dev = std::max(dev, std::abs(a - sparse.amplitude(m)));
    }
    for (const auto& [m, a] : sparse.amplitudes()) {
      dev = std::max(dev, std::abs(a - dense.amplitude(m)));
    }
    report["oracle"] = {{"max_amplitude_deviation", dev},
                        {"isometry_defect", oam::check_isometry(circuit, basis)}};
  }
  report["wall_time_ms"] = clock.ms();

  const std::string text = csv ? distribution_csv(dist) : report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return 0;
}

// ---------------------------------------------------------------------------

json verification_json(const oam::BuilderReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"detector", c.detector}, {"deviation", c.deviation}});
  }
  return {{"max_deviation", report.max_deviation}, {"checks", checks}};
}

int cmd_build(const std::string& apparatus, const std::string& out_path,
              const std::string& seq_kind, const std::string& range,
              const std::string& parity_flag, const std::string& coeffs_flag,
              const std::string& values_flag, int cells, bool no_equalize) {
  Stopwatch clock;
  json report = report_skeleton("build");
  report["config"] = {{"apparatus", apparatus}, {"out", out_path}};

  auto finish = [&](const oam::Circuit& circuit) {
    write_file(out_path, oam::emit_netlist(circuit));
    report["results"]["netlist"] = out_path;
    report["wall_time_ms"] = clock.ms();
    std::cout << report.dump(2) << "\n";
    return 0;
  };

  // Empty --seq means the apparatus-appropriate default.
  auto seq_or = [&](const char* fallback) {
    return sequence_from_flags(seq_kind.empty() ? fallback : seq_kind, range);
  };

  if (apparatus == "cd-tree") {
    const auto seq = seq_or("fibonacci");
    const auto parity =
        parity_flag == "even" ? oam::IndexParity::even : oam::IndexParity::odd;
    const auto tree = oam::build_cd_tree(seq, parity);
    report["results"]["verification"] = verification_json(tree.verification);
    report["results"]["chain"] = tree.chain;
    return finish(tree.circuit);
  }
  if (apparatus == "sgdt" || apparatus == "jump") {
    std::vector<oam::Complex> coeffs;
    if (apparatus == "jump") {
      coeffs = {{-1, 0}, {0.5, 0}};
    } else {
      coeffs = parse_complex_list(coeffs_flag);
    }
    const auto values = parse_int_list(values_flag);
    const auto target = oam::SuperpositionTarget::from_list(coeffs, values);
    const auto sgdt = oam::build_sgdt(target);
    report["results"]["verification"] = verification_json(sgdt.verification);
    return finish(sgdt.circuit);
  }
  if (apparatus == "tribonacci") {
    const auto seq = seq_or("tribonacci");
    const auto tree = oam::build_tribonacci_tree(seq);
    report["results"]["verification"] = verification_json(tree.verification);
    report["results"]["chain"] = tree.chain;
    return finish(tree.circuit);
  }
  if (apparatus == "mub4") {
    const auto vals = parse_int_list(values_flag);
    if (vals.size() != 4) throw oam::ConfigError("mub4 needs --values a,b,c,d");
    const auto mub = oam::build_mub4({vals[0], vals[1], vals[2], vals[3]});
    std::string base = out_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".onl") {
      base = base.substr(0, base.size() - 4);
    }
    write_file(base + ".L.onl", oam::emit_netlist(mub.l_circuit));
    write_file(base + ".M.onl", oam::emit_netlist(mub.m_circuit));
    // Cross-basis overlaps |<L_i|M_j>|^2.
    json overlaps = json::array();
    for (const auto& [ln, lb] : mub.l_bras) {
      for (const auto& [mn, mb] : mub.m_bras) {
        overlaps.push_back({{"l", ln},
                            {"m", mn},
                            {"overlap2", std::norm(oam::inner(lb, mb))}});
      }
    }
    report["results"] = {{"netlists", {base + ".L.onl", base + ".M.onl"}},
                         {"l_verification", verification_json(mub.l_verification)},
                         {"m_verification", verification_json(mub.m_verification)},
                         {"cross_basis_overlaps", overlaps}};
    report["wall_time_ms"] = clock.ms();
    std::cout << report.dump(2) << "\n";
    return 0;
  }
  if (apparatus == "rsg-cell") {
    const auto cell = oam::build_rsg_cell();
    return finish(cell.circuit);
  }
  if (apparatus == "rsg") {
    const auto seq = seq_or("fibonacci");
    const auto rsg = oam::build_rsg(cells, seq, !no_equalize);
    // Recurrence fidelity and output equality, from the sparse engine.
    const oam::PureState out_state = oam::simulate(rsg.circuit, rsg.canonical_input());
    std::vector<oam::PureState> outs;
    for (const auto& port : rsg.outputs) {
      outs.push_back(oam::label_vector(out_state, port));
    }
    double min_fidelity = 1.0;
    for (std::size_t k = 2; k < outs.size(); ++k) {
      const oam::PureState target =
          (outs[k - 1].normalized() + outs[k - 2].normalized()).normalized();
      min_fidelity = std::min(
          min_fidelity, std::abs(oam::inner(outs[k].normalized(), target)));
    }
    double lo = 1e300, hi = 0;
    for (const auto& s : outs) {
      lo = std::min(lo, s.norm());
      hi = std::max(hi, s.norm());
    }
    report["results"]["recurrence_fidelity_min"] = min_fidelity;
    report["results"]["output_magnitude_spread"] = hi - lo;
    report["results"]["cells"] = rsg.cells;
    return finish(rsg.circuit);
  }
  if (apparatus == "synthesizer") {
    const auto coeffs = parse_complex_list(coeffs_flag);
    const auto values = parse_int_list(values_flag);
    const auto target = oam::SuperpositionTarget::from_list(coeffs, values);
    const auto synth = oam::build_synthesizer(target);
    const auto sgdt = oam::build_sgdt(target);
    // Duality: the synthesizer ket is the conjugate of the detector bra.
    oam::PureState bra_as_ket;
    for (const auto& [m, a] : sgdt.target_bra.amplitudes()) {
      bra_as_ket.add(oam::Mode{synth.c_out, m.label}, std::conj(a));
    }
    const oam::PureState produced =
        oam::port_state(oam::simulate(synth.circuit, synth.canonical_input()),
                        synth.c_out);
    report["results"]["duality_deviation"] =
        oam::phase_aligned_deviation(produced, bra_as_ket);
    report["results"]["output_port"] = synth.c_out;
    return finish(synth.circuit);
  }
  throw oam::ConfigError("unknown apparatus '" + apparatus + "'");
}

// ---------------------------------------------------------------------------

oam::ProtocolConfig config_from_json(const json& j) {
  oam::ProtocolConfig config;
  if (j.contains("m0")) config.m0 = j["m0"].get<int>();
  if (j.contains("window")) config.window = j["window"].get<int>();
  if (j.contains("trials")) config.trials = j["trials"].get<std::uint64_t>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
  if (j.contains("basis_probability")) {
    config.basis_probability = j["basis_probability"].get<double>();
  }
  if (j.contains("sequence")) {
    const auto& s = j["sequence"];
    config.seq = sequence_from_flags(s.value("kind", "fibonacci"),
                                     std::to_string(s.value("min", 1)) + "," +
                                         std::to_string(s.value("max", 400)));
  }
  if (j.contains("eve")) {
    const auto& e = j["eve"];
    const auto kind = oam::eve_kind_from_string(e.value("kind", "none"));
    if (!kind) throw oam::ConfigError("unknown eve kind");
    config.eve.kind = *kind;
    config.eve.probability = e.value("probability", 1.0);
  }
  return config;
}

int cmd_qkd(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::uint64_t> trials, const std::string& eve_kind,
            std::optional<double> eve_probability, const std::string& transcript_path) {
  Stopwatch clock;
  oam::ProtocolConfig config;
  if (!config_path.empty()) {
    config = config_from_json(json::parse(read_file(config_path)));
  }
  config.seed = seed.value_or(config.seed);
  if (trials) config.trials = *trials;
  if (!eve_kind.empty()) {
    const auto kind = oam::eve_kind_from_string(eve_kind);
    if (!kind) throw oam::ConfigError("unknown eve kind '" + eve_kind + "'");
    config.eve.kind = *kind;
    if (config.eve.kind != oam::EveKind::none && config.eve.probability == 0) {
      config.eve.probability = 1.0;
    }
  }
  if (eve_probability) config.eve.probability = *eve_probability;

  const oam::ProtocolResult result = oam::run_protocol(config);

  if (!transcript_path.empty()) {
    std::ostringstream lines;
    for (const auto& rec : result.transcript) {
      json j = {{"trial", rec.trial},
                {"alice_basis", oam::to_string(rec.alice_basis)},
                {"bob_basis", oam::to_string(rec.bob_basis)},
                {"alice_outcome", rec.alice_outcome},
                {"bob_outcome", rec.bob_outcome},
                {"kept", rec.kept}};
      if (rec.kept) {
        j["alice_symbol"] = rec.alice_symbol;
        j["bob_symbol"] = rec.bob_symbol;
        j["agree"] = rec.agree;
      }
      lines << j.dump() << "\n";
    }
    write_file(transcript_path, lines.str());
  }

  json report = report_skeleton("qkd");
  report["config"] = {{"m0", config.m0},
                      {"window", config.window},
                      {"trials", config.trials},
                      {"seed", config.seed},
                      {"alpha", config.alpha},
                      {"eve",
                       {{"kind", oam::to_string(config.eve.kind)},
                        {"probability", config.eve.probability}}}};
  json tables = json::object();
  for (const auto& [key, cs] : result.detection.per_table) {
    // JSON has no infinity; an impossible-outcome event caps at DBL_MAX.
    const double stat =
        std::isinf(cs.statistic) ? std::numeric_limits<double>::max() : cs.statistic;
    tables[key] = {{"statistic", stat},
                   {"dof", cs.dof},
                   {"threshold", result.detection.thresholds.at(key)}};
  }
  report["results"] = {{"verdict", oam::to_string(result.detection.verdict)},
                       {"kept", result.kept},
                       {"key_agreement", result.key_agreement},
                       {"source_retention", result.source_retention},
                       {"chi_square", tables}};
  if (!transcript_path.empty()) report["results"]["transcript"] = transcript_path;
  report["wall_time_ms"] = clock.ms();
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_walk(int sites, int start, int steps, bool measured, const std::string& out_path,
             bool as_json) {
  Stopwatch clock;
  const oam::WalkStage stage = oam::build_walk_stage(sites);
  const int start_site = start < 0 ? sites / 2 : start;
  const oam::WalkRun run = oam::run_walk(stage, start_site, steps, measured);

  if (as_json) {
    json report = report_skeleton("walk");
    report["config"] = {{"sites", sites},
                        {"start", start_site},
                        {"steps", steps},
                        {"measured", measured}};
    report["results"] = {{"variance", run.variance}};
    report["wall_time_ms"] = clock.ms();
    std::cout << report.dump(2) << "\n";
    return 0;
  }
  std::ostringstream csv;
  csv << "step,position,probability\n";
  for (std::size_t t = 0; t < run.per_step.size(); ++t) {
    for (const auto& [pos, pr] : run.per_step[t]) {
      csv << t << "," << pos << "," << pr << "\n";
    }
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OAM interferometry workbench"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a netlist on an input state");
  std::string sim_netlist, sim_input, sim_port, sim_out;
  std::string sim_seq = "fibonacci", sim_range = "1,400";
  bool sim_csv = false, sim_json = false, sim_oracle = false;
  sim->add_option("netlist", sim_netlist, "Netlist file (.onl)")->required();
  sim->add_option("--input", sim_input, "Input state spec (S:7, F:5, val:13, pol:V, list:...)")
      ->required();
  sim->add_option("--port", sim_port, "Source port for the input state");
  sim->add_option("--seq", sim_seq, "Sequence kind for F/S/C/D specs");
  sim->add_option("--range", sim_range, "Sequence range min,max");
  sim->add_flag("--csv", sim_csv, "Emit CSV instead of JSON");
  sim->add_flag("--json", sim_json, "Emit JSON (default)");
  sim->add_flag("--oracle", sim_oracle, "Compare against the dense transfer matrix");
  sim->add_option("--out", sim_out, "Write the report to a file");

  // build
  auto* build = app.add_subcommand("build", "Construct an apparatus netlist");
  std::string build_apparatus, build_out, build_parity = "even";
  std::string build_seq, build_range = "2,55";
  std::string build_coeffs, build_values;
  int build_cells = 1;
  bool build_no_equalize = false;
  build->add_option("apparatus", build_apparatus,
                    "cd-tree|sgdt|tribonacci|jump|mub4|rsg-cell|rsg|synthesizer")
      ->required();
  build->add_option("--out", build_out, "Output netlist path")->required();
  build->add_option("--seq", build_seq, "Sequence kind (default depends on the apparatus)");
  build->add_option("--range", build_range, "Sequence range min,max");
  build->add_option("--parity", build_parity, "cd-tree chain parity: even|odd");
  build->add_option("--coeffs", build_coeffs, "Complex coefficients, e.g. 1,-1 or 1+1i,2");
  build->add_option("--values", build_values, "OAM values, e.g. 2,3,5");
  build->add_option("--cells", build_cells, "rsg cell count");
  build->add_flag("--no-equalize", build_no_equalize, "Skip rsg output equalizers");

  // qkd
  auto* qkd = app.add_subcommand("qkd", "Run the key-distribution protocol");
  std::string qkd_config, qkd_eve, qkd_transcript;
  std::uint64_t qkd_seed = default_seed();
  bool qkd_seed_set = false;
  std::uint64_t qkd_trials = 0;
  double qkd_eve_p = -1;
  qkd->add_option("--config", qkd_config, "Protocol config JSON file");
  qkd->add_option("--seed", qkd_seed, "RNG seed (overrides OAMLAB_SEED)")
      ->each([&](const std::string&) { qkd_seed_set = true; });
  qkd->add_option("--trials", qkd_trials, "Number of trials");
  qkd->add_option("--eve", qkd_eve,
                  "none|intercept_resend_L|intercept_resend_D|intercept_resend_random");
  qkd->add_option("--eve-probability", qkd_eve_p, "Interception probability");
  qkd->add_option("--transcript", qkd_transcript, "Write JSON-lines transcript here");

  // walk
  auto* walk = app.add_subcommand("walk", "Run the alternating L/D walk");
  int walk_sites = 64, walk_steps = 20, walk_start = -1;
  bool walk_measured = false, walk_coherent = false, walk_json = false;
  std::string walk_out;
  walk->add_option("--sites", walk_sites, "Chain length");
  walk->add_option("--steps", walk_steps, "Number of stages");
  walk->add_option("--start", walk_start, "Start site (default: middle)");
  walk->add_flag("--measured", walk_measured, "Measure the position every step");
  walk->add_flag("--coherent", walk_coherent, "Coherent evolution (default)");
  walk->add_flag("--json", walk_json, "Emit a JSON report instead of CSV");
  walk->add_option("--out", walk_out, "Write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_netlist, sim_input, sim_port, sim_seq, sim_range,
                          sim_csv && !sim_json, sim_oracle, sim_out);
    }
    if (build->parsed()) {
      return cmd_build(build_apparatus, build_out, build_seq, build_range, build_parity,
                       build_coeffs, build_values, build_cells, build_no_equalize);
    }
    if (qkd->parsed()) {
      return cmd_qkd(qkd_config,
                     qkd_seed_set || std::getenv("OAMLAB_SEED")
                         ? std::optional<std::uint64_t>(qkd_seed)
                         : std::nullopt,
                     qkd_trials ? std::optional<std::uint64_t>(qkd_trials) : std::nullopt,
                     qkd_eve, qkd_eve_p >= 0 ? std::optional<double>(qkd_eve_p) : std::nullopt,
                     qkd_transcript);
    }
    if (walk->parsed()) {
      if (walk_measured && walk_coherent) {
        throw oam::ConfigError("pick one of --measured / --coherent");
      }
      return cmd_walk(walk_sites, walk_start, walk_steps, walk_measured, walk_out,
                      walk_json);
    }
  } catch (const oam::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const oam::SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const oam::BuildError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBuild;
  } catch (const oam::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
