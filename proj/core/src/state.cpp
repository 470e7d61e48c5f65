#include "oam/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oam {

double PureState::norm2() const {
  double s = 0;
  for (const auto& [m, a] : amps_) s += std::norm(a);
  return s;
}

double PureState::norm() const { return std::sqrt(norm2()); }

PureState PureState::normalized() const {
  const double n = norm();
  if (n < 1e-300) throw Error("cannot normalize a zero state");
  PureState out = *this;
  out *= Complex(1.0 / n, 0.0);
  return out;
}

void PureState::prune(double threshold) {
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < threshold) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

PureState& PureState::operator*=(Complex c) {
  for (auto& [m, a] : amps_) a *= c;
  return *this;
}

PureState& PureState::operator+=(const PureState& other) {
  for (const auto& [m, a] : other.amps_) add(m, a);
  return *this;
}

Complex inner(const PureState& a, const PureState& b) {
  // Iterate the smaller map.
  if (a.size() > b.size()) return std::conj(inner(b, a));
  Complex s{};
  for (const auto& [m, amp] : a.amplitudes()) {
    const Complex bm = b.amplitude(m);
    if (bm != Complex{}) s += std::conj(amp) * bm;
  }
  return s;
}

double phase_aligned_deviation(const PureState& a, const PureState& b) {
  const PureState an = a.normalized();
  const PureState bn = b.normalized();
  const Complex ov = inner(an, bn);
  // 0 overlap: no phase can align; report the largest amplitude mismatch.
  Complex phase = Complex(1.0, 0.0);
  if (std::abs(ov) > 1e-300) phase = ov / std::abs(ov);
  double worst = 0;
  std::set<Mode> modes;
  for (const auto& [m, amp] : an.amplitudes()) modes.insert(m);
  for (const auto& [m, amp] : bn.amplitudes()) modes.insert(m);
  for (const Mode& m : modes) {
    worst = std::max(worst, std::abs(an.amplitude(m) - phase * bn.amplitude(m)));
  }
  return worst;
}

namespace {
Mode seq_mode(const PathId& path, const SequenceSpec& seq, int n) {
  const long long v = seq.term(n);
  if (!seq.in_range(v)) {
    throw Error("sequence index " + std::to_string(n) +
                " (value " + std::to_string(v) + ") is outside the range [" +
                std::to_string(seq.min) + ", " + std::to_string(seq.max) + "]");
  }
  return Mode{path, Label::oam(v)};
}
}  // namespace

PureState make_named_state(StateFamily family, int n, const SequenceSpec& seq,
                           const PathId& path) {
  const double r = 1.0 / std::sqrt(2.0);
  PureState s;
  switch (family) {
    case StateFamily::F:
      s.add(seq_mode(path, seq, n), Complex(1, 0));
      break;
    case StateFamily::S:
      s.add(seq_mode(path, seq, n - 1), Complex(r, 0));
      s.add(seq_mode(path, seq, n + 1), Complex(r, 0));
      break;
    case StateFamily::C:
      s.add(seq_mode(path, seq, n), Complex(0, r));
      s.add(seq_mode(path, seq, n - 2), Complex(0, r));
      break;
    case StateFamily::D:
      s.add(seq_mode(path, seq, n), Complex(r, 0));
      s.add(seq_mode(path, seq, n - 2), Complex(-r, 0));
      break;
  }
  return s;
}

double TwoPhotonState::norm2() const {
  double s = 0;
  for (const auto& [k, a] : amps_) s += std::norm(a);
  return s;
}

TwoPhotonState TwoPhotonState::normalized() const {
  const double n = std::sqrt(norm2());
  if (n < 1e-300) throw Error("cannot normalize a zero state");
  TwoPhotonState out = *this;
  for (auto& [k, a] : out.amps_) a /= n;
  return out;
}

void TwoPhotonState::prune(double threshold) {
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < threshold) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

TwoPhotonState TwoPhotonState::map_slot(
    int slot, const std::function<PureState(const Mode&)>& fn) const {
  std::map<Mode, PureState> images;
  for (const Mode& m : slot_modes(slot)) images.emplace(m, fn(m));
  TwoPhotonState out;
  for (const auto& [key, amp] : amps_) {
    const Mode& moving = slot == 0 ? key.first : key.second;
    const Mode& fixed = slot == 0 ? key.second : key.first;
    for (const auto& [m2, a2] : images.at(moving).amplitudes()) {
      if (slot == 0) {
        out.add(m2, fixed, amp * a2);
      } else {
        out.add(fixed, m2, amp * a2);
      }
    }
  }
  out.prune();
  return out;
}

PureState TwoPhotonState::project_slot(int slot, const PureState& bra) const {
  PureState out;
  for (const auto& [key, amp] : amps_) {
    const Mode& projected = slot == 0 ? key.first : key.second;
    const Mode& kept = slot == 0 ? key.second : key.first;
    const Complex b = bra.amplitude(projected);
    if (b != Complex{}) out.add(kept, std::conj(b) * amp);
  }
  out.prune();
  return out;
}

std::vector<Mode> TwoPhotonState::slot_modes(int slot) const {
  std::set<Mode> seen;
  for (const auto& [key, amp] : amps_) {
    seen.insert(slot == 0 ? key.first : key.second);
  }
  return {seen.begin(), seen.end()};
}

bool TwoPhotonState::label_swap_symmetric(double tol) const {
  for (const auto& [key, amp] : amps_) {
    const Mode swapped_a{key.first.path, key.second.label};
    const Mode swapped_b{key.second.path, key.first.label};
    if (std::abs(amplitude(swapped_a, swapped_b) - amp) > tol) return false;
  }
  return true;
}

}  // namespace oam
