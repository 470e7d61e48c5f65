#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "oam/errors.hpp"

namespace oam {

// Spatial path identifier, unique within a circuit.
using PathId = std::string;

enum class Pol : std::uint8_t { H = 0, V = 1 };

// The bound on |l| for integer OAM labels. Configurable at runtime;
// sequence generation and netlist parsing reject values beyond it.
int max_abs_oam();
void set_max_abs_oam(int bound);

// Internal mode label: either an integer OAM topological charge or one of
// the two polarization tags. Never both.
class Label {
 public:
  static Label oam(long long value);  // throws Error if |value| > max_abs_oam()
  static Label pol(Pol p) { return Label(true, static_cast<std::int32_t>(p)); }
  static Label h() { return pol(Pol::H); }
  static Label v() { return pol(Pol::V); }

  bool is_oam() const { return !is_pol_; }
  bool is_pol() const { return is_pol_; }
  int value() const;      // OAM charge; throws on polarization labels
  Pol pol_tag() const;    // throws on OAM labels

  // OAM labels sort before polarization tags; within a kind, numerically (H < V).
  auto operator<=>(const Label&) const = default;

  std::string to_string() const;
  // Accepts "H", "V" or a decimal integer. Returns nullopt on anything else.
  static std::optional<Label> parse(std::string_view token);

 private:
  Label(bool is_pol, std::int32_t value) : is_pol_(is_pol), value_(value) {}
  bool is_pol_ = false;
  std::int32_t value_ = 0;
};

// One basis mode of the optical state space.
struct Mode {
  PathId path;
  Label label = Label::oam(0);

  auto operator<=>(const Mode&) const = default;
  std::string to_string() const { return path + ":" + label.to_string(); }
};

}  // namespace oam
