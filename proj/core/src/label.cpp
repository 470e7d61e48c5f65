#include "oam/label.hpp"

#include <atomic>
#include <charconv>

namespace oam {

namespace {
std::atomic<int> g_max_abs_oam{1024};
}

int max_abs_oam() { return g_max_abs_oam.load(std::memory_order_relaxed); }

void set_max_abs_oam(int bound) {
  if (bound < 1) throw Error("label bound must be positive");
  g_max_abs_oam.store(bound, std::memory_order_relaxed);
}

Label Label::oam(long long value) {
  const long long bound = max_abs_oam();
  if (value > bound || value < -bound) {
    throw Error("OAM label " + std::to_string(value) +
                " exceeds the label bound " + std::to_string(bound));
  }
  return Label(false, static_cast<std::int32_t>(value));
}

int Label::value() const {
  if (is_pol_) throw Error("polarization label has no OAM value");
  return value_;
}

Pol Label::pol_tag() const {
  if (!is_pol_) throw Error("OAM label has no polarization tag");
  return static_cast<Pol>(value_);
}

std::string Label::to_string() const {
  if (is_pol_) return value_ == 0 ? "H" : "V";
  return std::to_string(value_);
}

std::optional<Label> Label::parse(std::string_view token) {
  if (token == "H") return Label::h();
  if (token == "V") return Label::v();
  long long v = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  const long long bound = max_abs_oam();
  if (v > bound || v < -bound) return std::nullopt;
  return Label::oam(v);
}

}  // namespace oam
