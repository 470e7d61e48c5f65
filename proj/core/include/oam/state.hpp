#pragma once

#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "oam/label.hpp"
#include "oam/sequence.hpp"

namespace oam {

using Complex = std::complex<double>;

// Amplitudes below this magnitude are dropped after every element
// application; keeps sparse maps bounded without touching 1e-12 assertions.
inline constexpr double kPruneThreshold = 1e-15;

// Sparse complex amplitude map over modes. May be sub-normalized: lossy
// circuits track the missing probability as 1 - norm2().
class PureState {
 public:
  PureState() = default;
  static PureState basis(Mode m) {
    PureState s;
    s.amps_[std::move(m)] = Complex(1.0, 0.0);
    return s;
  }

  void add(const Mode& m, Complex a) {
    auto it = amps_.find(m);
    if (it == amps_.end()) {
      if (a != Complex{}) amps_.emplace(m, a);
    } else {
      it->second += a;
    }
  }
  void set(const Mode& m, Complex a) { amps_[m] = a; }

  Complex amplitude(const Mode& m) const {
    auto it = amps_.find(m);
    return it == amps_.end() ? Complex{} : it->second;
  }

  const std::map<Mode, Complex>& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }
  std::size_t size() const { return amps_.size(); }

  double norm2() const;
  double norm() const;
  PureState normalized() const;  // throws Error on (near-)zero states
  void prune(double threshold = kPruneThreshold);

  PureState& operator*=(Complex c);
  PureState& operator+=(const PureState& other);
  friend PureState operator*(Complex c, PureState s) { return s *= c; }
  friend PureState operator+(PureState a, const PureState& b) { return a += b; }

 private:
  std::map<Mode, Complex> amps_;
};

// <a|b> = sum over modes of conj(a_m) * b_m. Missing modes contribute zero.
Complex inner(const PureState& a, const PureState& b);

// Largest |a_m - e^{i theta} b_m| after normalizing both states and aligning
// the global phase theta that maximizes overlap. Zero iff proportional.
double phase_aligned_deviation(const PureState& a, const PureState& b);

// The named single-photon families over a sequence window:
//   F_n : eigenstate |F_n>
//   S_n : (|F_{n-1}> + |F_{n+1}>)/sqrt2
//   C_n : i/sqrt2 (|F_n> + |F_{n-2}>)
//   D_n : 1/sqrt2 (|F_n> - |F_{n-2}>)
enum class StateFamily { F, S, C, D };

PureState make_named_state(StateFamily family, int n, const SequenceSpec& seq,
                           const PathId& path);

// Sparse two-photon amplitude map over ordered mode pairs (slot A, slot B).
class TwoPhotonState {
 public:
  using Key = std::pair<Mode, Mode>;

  void add(const Mode& a, const Mode& b, Complex amp) {
    auto it = amps_.find({a, b});
    if (it == amps_.end()) {
      if (amp != Complex{}) amps_.emplace(Key{a, b}, amp);
    } else {
      it->second += amp;
    }
  }
  Complex amplitude(const Mode& a, const Mode& b) const {
    auto it = amps_.find({a, b});
    return it == amps_.end() ? Complex{} : it->second;
  }
  const std::map<Key, Complex>& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }

  double norm2() const;
  TwoPhotonState normalized() const;
  void prune(double threshold = kPruneThreshold);

  // Applies a linear map to one slot: fn gives the image of each basis mode.
  // Slot 0 is photon A, slot 1 photon B.
  TwoPhotonState map_slot(int slot,
                          const std::function<PureState(const Mode&)>& fn) const;

  // Projects one slot onto <bra| (not necessarily normalized) and returns the
  // resulting single-photon state of the other slot, sub-normalized by the
  // projection amplitude.
  PureState project_slot(int slot, const PureState& bra) const;

  // Distinct modes appearing in the given slot.
  std::vector<Mode> slot_modes(int slot) const;

  // True when amplitudes are symmetric under exchanging the two internal
  // labels while keeping each photon on its own path.
  bool label_swap_symmetric(double tol) const;

 private:
  std::map<Key, Complex> amps_;
};

}  // namespace oam
