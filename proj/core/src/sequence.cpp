#include "oam/sequence.hpp"

#include <algorithm>
#include <limits>

#include "oam/label.hpp"

namespace oam {

SequenceSpec SequenceSpec::fibonacci(long long min, long long max) {
  return {SequenceKind::fibonacci, {1, 2}, {1, 1}, min, max};
}

SequenceSpec SequenceSpec::lucas(long long min, long long max) {
  return {SequenceKind::lucas, {1, 3}, {1, 1}, min, max};
}

SequenceSpec SequenceSpec::tribonacci(long long min, long long max) {
  return {SequenceKind::tribonacci, {1, 2, 4}, {1, 1, 1}, min, max};
}

SequenceSpec SequenceSpec::custom(std::vector<long long> initial,
                                  std::vector<long long> coeffs,
                                  long long min, long long max) {
  SequenceSpec s{SequenceKind::custom, std::move(initial), std::move(coeffs), min, max};
  s.validate();
  return s;
}

void SequenceSpec::validate() const {
  if (initial.empty()) throw Error("sequence needs at least one initial value");
  if (coeffs.empty()) throw Error("sequence needs at least one recurrence coefficient");
  if (coeffs.size() > initial.size()) {
    throw Error("recurrence order exceeds the number of initial values");
  }
}

long long SequenceSpec::term(int n) const {
  validate();
  if (n < 1) throw Error("sequence index must be >= 1, got " + std::to_string(n));
  const std::size_t order = coeffs.size();
  if (static_cast<std::size_t>(n) <= initial.size()) {
    return initial[static_cast<std::size_t>(n) - 1];
  }
  std::vector<long long> window(initial.end() - static_cast<long>(order), initial.end());
  long long value = 0;
  for (int i = static_cast<int>(initial.size()) + 1; i <= n; ++i) {
    value = 0;
    for (std::size_t j = 0; j < order; ++j) {
      const long long contrib = coeffs[j] * window[order - 1 - j];
      if ((contrib > 0 && value > std::numeric_limits<long long>::max() - contrib) ||
          (contrib < 0 && value < std::numeric_limits<long long>::min() - contrib)) {
        throw Error("sequence term overflow at index " + std::to_string(i));
      }
      value += contrib;
    }
    window.erase(window.begin());
    window.push_back(value);
  }
  return value;
}

std::vector<long long> SequenceSpec::generate() const {
  validate();
  if (min > max) return {};
  std::vector<long long> out;
  const long long bound = max_abs_oam();
  long long prev_in_range = std::numeric_limits<long long>::min();
  for (int n = 1;; ++n) {
    long long v = 0;
    try {
      v = term(n);
    } catch (const Error&) {
      break;  // overflow past the window is simply the end of the sequence
    }
    if (v > max) break;
    if (v >= min) {
      if (v > bound || v < -bound) {
        throw Error("sequence value " + std::to_string(v) +
                    " exceeds the OAM label bound " + std::to_string(bound));
      }
      if (v <= prev_in_range) {
        throw Error("sequence is not strictly increasing within its range");
      }
      prev_in_range = v;
      out.push_back(v);
    }
    // Guard against sequences that never grow past the window.
    if (n > 4096) throw Error("sequence did not leave the range after 4096 terms");
  }
  return out;
}

std::vector<int> SequenceSpec::indices_in_range() const {
  validate();
  std::vector<int> out;
  if (min > max) return out;
  for (int n = 1;; ++n) {
    long long v = 0;
    try {
      v = term(n);
    } catch (const Error&) {
      break;
    }
    if (v > max) break;
    if (v >= min) out.push_back(n);
    if (n > 4096) break;
  }
  return out;
}

std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::fibonacci: return "fibonacci";
    case SequenceKind::lucas: return "lucas";
    case SequenceKind::tribonacci: return "tribonacci";
    case SequenceKind::custom: return "custom";
  }
  return "?";
}

Rational fibonacci_fraction(long long min, long long max) {
  if (min > max) throw Error("fibonacci_fraction needs min <= max");
  long long count = 0;
  long long a = 1, b = 2;  // F1, F2
  if (a >= min && a <= max) ++count;
  while (b <= max) {
    if (b >= min) ++count;
    const long long next = a + b;
    a = b;
    b = next;
  }
  return Rational{count, max - min + 1};
}

}  // namespace oam
