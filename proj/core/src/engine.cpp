#include "oam/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oam {

PureState simulate(const Circuit& circuit, const PureState& input) {
  for (const auto& [mode, amp] : input.amplitudes()) {
    if (!circuit.is_source(mode.path)) {
      throw SemanticError("input amplitude on unknown source path '" + mode.path + "'");
    }
  }
  PureState state = input;
  for (const Element& e : circuit.elements()) {
    state = oam::apply(e, state);
  }
  return state;
}

namespace {

// Set-valued abstract run: per-wire reachable label sets, evolved element by
// element. Gives the dense mode universe at every step.
using ModeSet = std::set<Mode>;

ModeSet step_modes(const Element& e, const ModeSet& cur) {
  ModeSet next;
  auto touches = [&](const Mode& m, const std::vector<PathId>& ports) {
    return std::find(ports.begin(), ports.end(), m.path) != ports.end();
  };
  const auto ins = input_ports(e);
  for (const Mode& m : cur) {
    if (!touches(m, ins)) {
      next.insert(m);
      continue;
    }
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            next.insert({el.out_c, m.label});
            next.insert({el.out_d, m.label});
          } else if constexpr (std::is_same_v<T, PhaseShift> ||
                               std::is_same_v<T, Attenuator>) {
            next.insert(m);
          } else if constexpr (std::is_same_v<T, OamShift>) {
            if (m.label.is_pol()) {
              throw SemanticError("label-kind mismatch: OAM shift on port '" +
                                  el.port + "' meets polarization modes");
            }
            next.insert({m.path, Label::oam(
                                     static_cast<long long>(m.label.value()) + el.delta)});
          } else if constexpr (std::is_same_v<T, Sorter>) {
            auto it = el.table.find(m.label);
            next.insert({it == el.table.end() ? el.reject : it->second, m.label});
          } else {  // LabelUnitary
            if (m.label.is_pol() != el.l0.is_pol()) {
              throw SemanticError("label-kind mismatch: label unitary on port '" +
                                  el.port + "' meets modes of the other kind");
            }
            if (m.label == el.l0 || m.label == el.l1) {
              next.insert({m.path, el.l0});
              next.insert({m.path, el.l1});
            } else {
              next.insert(m);
            }
          }
        },
        e);
  }
  return next;
}

// Dense per-element matrix with entries written directly from the element
// parameters. Deliberately does not reuse apply(): the oracle is the second,
// independent route the sparse engine is tested against.
Eigen::MatrixXcd element_matrix(const Element& e, const std::vector<Mode>& cur,
                                const std::vector<Mode>& next) {
  auto index_of = [](const std::vector<Mode>& basis, const Mode& m) -> Eigen::Index {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || *it != m) return -1;
    return it - basis.begin();
  };
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(next.size()),
                                                static_cast<Eigen::Index>(cur.size()));
  auto put = [&](const Mode& om, Eigen::Index j, Complex c) {
    const Eigen::Index i = index_of(next, om);
    if (i < 0) throw Error("oracle mode bookkeeping lost mode " + om.to_string());
    mat(i, j) = c;
  };
  const auto ins = input_ports(e);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(cur.size()); ++j) {
    const Mode& m = cur[static_cast<std::size_t>(j)];
    if (std::find(ins.begin(), ins.end(), m.path) == ins.end()) {
      put(m, j, Complex(1, 0));
      continue;
    }
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            const double r = el.ratio;
            const double s = std::sqrt(1.0 - r * r);
            const bool from_a = m.path == el.in_a;
            if (el.convention == BsConvention::hadamard) {
              put({el.out_c, m.label}, j, Complex(from_a ? r : s, 0));
              put({el.out_d, m.label}, j, Complex(from_a ? s : -r, 0));
            } else {
              put({el.out_c, m.label}, j, from_a ? Complex(r, 0) : Complex(0, s));
              put({el.out_d, m.label}, j, from_a ? Complex(0, s) : Complex(r, 0));
            }
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            put(m, j, std::polar(1.0, el.phi));
          } else if constexpr (std::is_same_v<T, Attenuator>) {
            put(m, j, Complex(el.t, 0));
          } else if constexpr (std::is_same_v<T, OamShift>) {
            put({m.path, Label::oam(static_cast<long long>(m.label.value()) + el.delta)},
                j, Complex(1, 0));
          } else if constexpr (std::is_same_v<T, Sorter>) {
            auto it = el.table.find(m.label);
            put({it == el.table.end() ? el.reject : it->second, m.label}, j,
                Complex(1, 0));
          } else {  // LabelUnitary
            if (m.label == el.l0) {
              put({m.path, el.l0}, j, el.u.m00);
              put({m.path, el.l1}, j, el.u.m10);
            } else if (m.label == el.l1) {
              put({m.path, el.l0}, j, el.u.m01);
              put({m.path, el.l1}, j, el.u.m11);
            } else {
              put(m, j, Complex(1, 0));
            }
          }
        },
        e);
  }
  return mat;
}

}  // namespace

Eigen::Index TransferMatrix::row_of(const Mode& mode) const {
  auto it = std::lower_bound(output_basis.begin(), output_basis.end(), mode);
  if (it == output_basis.end() || *it != mode) return -1;
  return it - output_basis.begin();
}

Eigen::Index TransferMatrix::col_of(const Mode& mode) const {
  auto it = std::lower_bound(input_basis.begin(), input_basis.end(), mode);
  if (it == input_basis.end() || *it != mode) return -1;
  return it - input_basis.begin();
}

PureState TransferMatrix::propagate(const PureState& input) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m.cols());
  for (const auto& [mode, amp] : input.amplitudes()) {
    const Eigen::Index j = col_of(mode);
    if (j < 0) throw Error("input mode " + mode.to_string() + " not in oracle basis");
    v(j) = amp;
  }
  const Eigen::VectorXcd w = m * v;
  PureState out;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) != Complex{}) out.add(output_basis[static_cast<std::size_t>(i)], w(i));
  }
  return out;
}

TransferMatrix transfer_matrix(const Circuit& circuit,
                               const std::vector<Mode>& input_basis) {
  for (const Mode& m : input_basis) {
    if (!circuit.is_source(m.path)) {
      throw SemanticError("basis mode " + m.to_string() + " is not on a source path");
    }
  }
  std::vector<Mode> cur = input_basis;
  std::sort(cur.begin(), cur.end());
  if (std::adjacent_find(cur.begin(), cur.end()) != cur.end()) {
    throw SemanticError("duplicate mode in input basis");
  }
  TransferMatrix out;
  out.input_basis = cur;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(
      static_cast<Eigen::Index>(cur.size()), static_cast<Eigen::Index>(cur.size()));
  ModeSet reach(cur.begin(), cur.end());
  for (const Element& e : circuit.elements()) {
    const ModeSet next_set = step_modes(e, reach);
    std::vector<Mode> next(next_set.begin(), next_set.end());
    acc = element_matrix(e, std::vector<Mode>(reach.begin(), reach.end()), next) * acc;
    reach = next_set;
  }
  out.output_basis.assign(reach.begin(), reach.end());
  out.m = std::move(acc);
  return out;
}

std::map<std::string, std::vector<std::pair<Label, PureState>>> detector_rows(
    const Circuit& circuit, const std::vector<Mode>& input_basis) {
  const TransferMatrix tm = transfer_matrix(circuit, input_basis);
  std::map<std::string, std::vector<std::pair<Label, PureState>>> out;
  for (const auto& [name, port] : circuit.detectors()) {
    std::vector<std::pair<Label, PureState>> rows;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(tm.output_basis.size()); ++i) {
      const Mode& om = tm.output_basis[static_cast<std::size_t>(i)];
      if (om.path != port) continue;
      PureState bra;
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(tm.input_basis.size()); ++j) {
        const Complex c = tm.m(i, j);
        if (c != Complex{}) {
          bra.add(tm.input_basis[static_cast<std::size_t>(j)], std::conj(c));
        }
      }
      bra.prune();
      if (!bra.empty()) rows.emplace_back(om.label, std::move(bra));
    }
    out.emplace(name, std::move(rows));
  }
  return out;
}

std::map<std::string, PureState> detector_projectors(
    const Circuit& circuit, const std::vector<Mode>& input_basis) {
  auto rows = detector_rows(circuit, input_basis);
  std::map<std::string, PureState> out;
  for (auto& [name, list] : rows) {
    if (list.size() > 1) {
      throw Error("detector '" + name +
                  "' sees " + std::to_string(list.size()) +
                  " labels; its projector is not rank one");
    }
    out.emplace(name, list.empty() ? PureState{} : std::move(list.front().second));
  }
  return out;
}

double check_isometry(const Circuit& circuit, const std::vector<Mode>& basis) {
  if (basis.empty()) return 0.0;
  const TransferMatrix tm = transfer_matrix(circuit, basis);
  const Eigen::MatrixXcd g = tm.m.adjoint() * tm.m;
  const Eigen::MatrixXcd id =
      Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  return (g - id).cwiseAbs().maxCoeff();
}

std::vector<Mode> source_modes(const PathId& port, const std::vector<Label>& labels) {
  std::vector<Mode> out;
  out.reserve(labels.size());
  for (const Label& l : labels) out.push_back({port, l});
  return out;
}

PureState port_state(const PureState& state, const PathId& port) {
  PureState out;
  for (const auto& [m, a] : state.amplitudes()) {
    if (m.path == port) out.add(m, a);
  }
  return out;
}

PureState label_vector(const PureState& state, const PathId& port) {
  PureState out;
  for (const auto& [m, a] : state.amplitudes()) {
    if (m.path == port) out.add({PathId{}, m.label}, a);
  }
  return out;
}

}  // namespace oam
