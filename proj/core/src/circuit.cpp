#include "oam/circuit.hpp"

#include <algorithm>

namespace oam {

void Circuit::require_live(const PathId& port, const char* what) const {
  if (!produced_.count(port)) {
    throw SemanticError(std::string(what) + " references unknown port '" + port + "'");
  }
  if (consumed_.count(port)) {
    throw SemanticError(std::string(what) + " references port '" + port +
                        "' which is already consumed");
  }
  if (detected_.count(port)) {
    throw SemanticError(std::string(what) + " references port '" + port +
                        "' which is terminated by a detector");
  }
}

void Circuit::produce(const PathId& port) {
  if (port.empty()) throw SemanticError("empty port name");
  if (!produced_.insert(port).second) {
    throw SemanticError("duplicate port '" + port + "'");
  }
}

void Circuit::add_source(const PathId& port) {
  produce(port);
  sources_.push_back(port);
}

void Circuit::add_element(Element e) {
  const auto ins = input_ports(e);
  const auto outs = output_ports(e);
  for (const PathId& p : ins) require_live(p, "element");
  if (ins.size() == 2 && ins[0] == ins[1]) {
    throw SemanticError("element uses port '" + ins[0] + "' for both inputs");
  }
  if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
    if (!(bs->ratio > 0.0 && bs->ratio < 1.0)) {
      throw SemanticError("beam splitter ratio must lie in (0, 1)");
    }
  }
  if (const auto* at = std::get_if<Attenuator>(&e)) {
    if (!(at->t >= 0.0 && at->t <= 1.0)) {
      throw SemanticError("attenuator transmission must lie in [0, 1]");
    }
  }
  if (const auto* lu = std::get_if<LabelUnitary>(&e)) {
    if (lu->l0 == lu->l1) throw SemanticError("label unitary needs two distinct labels");
    if (lu->l0.is_pol() != lu->l1.is_pol()) {
      throw SemanticError("label unitary labels must be of one kind");
    }
    if (!lu->u.is_unitary()) throw SemanticError("label unitary matrix is not unitary");
  }
  if (const auto* so = std::get_if<Sorter>(&e)) {
    std::set<PathId> outs_seen;
    for (const auto& [label, port] : so->table) {
      if (!outs_seen.insert(port).second) {
        throw SemanticError("sorter routes two labels to port '" + port + "'");
      }
    }
    if (outs_seen.count(so->reject)) {
      throw SemanticError("sorter reject port '" + so->reject + "' also appears in the table");
    }
  }
  // Output ports must be brand new and mutually distinct.
  std::set<PathId> fresh;
  for (const PathId& p : outs) {
    if (!fresh.insert(p).second) {
      throw SemanticError("element declares output port '" + p + "' twice");
    }
  }
  if (!is_in_place(e)) {
    for (const PathId& p : ins) consumed_.insert(p);
  }
  for (const PathId& p : outs) produce(p);
  elements_.push_back(std::move(e));
}

void Circuit::add_detector(const std::string& name, const PathId& port) {
  if (name.empty()) throw SemanticError("empty detector name");
  for (const auto& [n, p] : detectors_) {
    if (n == name) throw SemanticError("duplicate detector name '" + name + "'");
  }
  require_live(port, "detector");
  detected_.insert(port);
  detectors_.emplace_back(name, port);
}

bool Circuit::is_source(const PathId& port) const {
  return std::find(sources_.begin(), sources_.end(), port) != sources_.end();
}

bool Circuit::has_detector(const std::string& name) const {
  for (const auto& [n, p] : detectors_) {
    if (n == name) return true;
  }
  return false;
}

PathId Circuit::detector_port(const std::string& name) const {
  for (const auto& [n, p] : detectors_) {
    if (n == name) return p;
  }
  throw SemanticError("unknown detector '" + name + "'");
}

std::vector<PathId> Circuit::terminal_ports() const {
  std::vector<PathId> out;
  for (const PathId& p : produced_) {
    if (!consumed_.count(p)) out.push_back(p);
  }
  return out;
}

std::string Circuit::detector_name_for(const PathId& port) const {
  for (const auto& [n, p] : detectors_) {
    if (p == port) return n;
  }
  return {};
}

bool Circuit::operator==(const Circuit& other) const {
  std::vector<PathId> a = sources_, b = other.sources_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;
  if (elements_ != other.elements_) return false;
  auto da = detectors_, db = other.detectors_;
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  return da == db;
}

}  // namespace oam
