#include "oam/elements.hpp"

#include <cmath>

namespace oam {

bool Mat2::is_unitary(double tol) const {
  // Rows orthonormal.
  const double r0 = std::norm(m00) + std::norm(m01);
  const double r1 = std::norm(m10) + std::norm(m11);
  const Complex cross = m00 * std::conj(m10) + m01 * std::conj(m11);
  return std::abs(r0 - 1) < tol && std::abs(r1 - 1) < tol && std::abs(cross) < tol;
}

std::vector<PathId> input_ports(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<PathId> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          return {el.in_a, el.in_b};
        } else if constexpr (std::is_same_v<T, Sorter>) {
          return {el.in};
        } else {
          return {el.port};
        }
      },
      e);
}

std::vector<PathId> output_ports(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<PathId> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          return {el.out_c, el.out_d};
        } else if constexpr (std::is_same_v<T, Sorter>) {
          std::vector<PathId> out;
          for (const auto& [label, port] : el.table) out.push_back(port);
          out.push_back(el.reject);
          return out;
        } else {
          return {};
        }
      },
      e);
}

bool is_in_place(const Element& e) { return output_ports(e).empty(); }

namespace {

PureState apply_bs(const BeamSplitter& bs, const PureState& state) {
  const double r = bs.ratio;
  const double s = std::sqrt(1.0 - r * r);
  Complex cc, cd, dc, dd;
  if (bs.convention == BsConvention::hadamard) {
    cc = r; cd = s; dc = s; dd = -r;
  } else {
    cc = r; cd = Complex(0, s); dc = Complex(0, s); dd = r;
  }
  PureState out;
  for (const auto& [m, a] : state.amplitudes()) {
    if (m.path == bs.in_a) {
      out.add({bs.out_c, m.label}, cc * a);
      out.add({bs.out_d, m.label}, dc * a);
    } else if (m.path == bs.in_b) {
      out.add({bs.out_c, m.label}, cd * a);
      out.add({bs.out_d, m.label}, dd * a);
    } else {
      out.add(m, a);
    }
  }
  return out;
}

PureState apply_sorter(const Sorter& so, const PureState& state) {
  PureState out;
  for (const auto& [m, a] : state.amplitudes()) {
    if (m.path != so.in) {
      out.add(m, a);
      continue;
    }
    auto it = so.table.find(m.label);
    const PathId& dest = it == so.table.end() ? so.reject : it->second;
    out.add({dest, m.label}, a);
  }
  return out;
}

PureState apply_label_unitary(const LabelUnitary& lu, const PureState& state) {
  PureState out;
  const Mode mode0{lu.port, lu.l0};
  const Mode mode1{lu.port, lu.l1};
  const Complex a0 = state.amplitude(mode0);
  const Complex a1 = state.amplitude(mode1);
  for (const auto& [m, a] : state.amplitudes()) {
    if (m.path != lu.port) {
      out.add(m, a);
      continue;
    }
    if (m.label.is_pol() != lu.l0.is_pol()) {
      throw SemanticError("label-kind mismatch: unitary on labels (" +
                          lu.l0.to_string() + ", " + lu.l1.to_string() +
                          ") applied to amplitude at label " + m.label.to_string() +
                          " on port '" + lu.port + "'");
    }
    if (m == mode0 || m == mode1) continue;  // handled below
    out.add(m, a);
  }
  if (a0 != Complex{} || a1 != Complex{}) {
    out.add(mode0, lu.u.m00 * a0 + lu.u.m01 * a1);
    out.add(mode1, lu.u.m10 * a0 + lu.u.m11 * a1);
  }
  return out;
}

}  // namespace

PureState apply(const Element& e, const PureState& state) {
  PureState out = std::visit(
      [&](const auto& el) -> PureState {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          return apply_bs(el, state);
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          const Complex f = std::polar(1.0, el.phi);
          PureState o;
          for (const auto& [m, a] : state.amplitudes()) {
            o.add(m, m.path == el.port ? f * a : a);
          }
          return o;
        } else if constexpr (std::is_same_v<T, Attenuator>) {
          PureState o;
          for (const auto& [m, a] : state.amplitudes()) {
            o.add(m, m.path == el.port ? el.t * a : a);
          }
          return o;
        } else if constexpr (std::is_same_v<T, OamShift>) {
          PureState o;
          for (const auto& [m, a] : state.amplitudes()) {
            if (m.path != el.port) {
              o.add(m, a);
              continue;
            }
            if (m.label.is_pol()) {
              throw SemanticError("label-kind mismatch: OAM shift on port '" +
                                  el.port + "' met polarization amplitude");
            }
            o.add({m.path, Label::oam(static_cast<long long>(m.label.value()) +
                                      el.delta)},
                  a);
          }
          return o;
        } else if constexpr (std::is_same_v<T, Sorter>) {
          return apply_sorter(el, state);
        } else {
          return apply_label_unitary(el, state);
        }
      },
      e);
  out.prune();
  return out;
}

Element half_wave_plate(const PathId& port, Diagonal d) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat2 u;
  if (d == Diagonal::plus45) {
    // H -> (H - V)/sqrt2, V -> (H + V)/sqrt2
    u = Mat2{Complex(r, 0), Complex(r, 0), Complex(-r, 0), Complex(r, 0)};
  } else {
    // H -> (H + V)/sqrt2, V -> (V - H)/sqrt2
    u = Mat2{Complex(r, 0), Complex(-r, 0), Complex(r, 0), Complex(r, 0)};
  }
  return LabelUnitary{port, Label::h(), Label::v(), u};
}

}  // namespace oam
