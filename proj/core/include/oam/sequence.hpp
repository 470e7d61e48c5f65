#pragma once

#include <string>
#include <vector>

#include "oam/errors.hpp"

namespace oam {

enum class SequenceKind { fibonacci, lucas, tribonacci, custom };

// Exact ratio of two integer counts; kept unreduced so the numerator and
// denominator stay meaningful ("8 of 54 integers").
struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// A linear integer recurrence together with the window of values a circuit
// may use. Indexing is 1-based over (initial values, then recurrence terms),
// so the Fibonacci convention here is F1 = 1, F2 = 2.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::fibonacci;
  std::vector<long long> initial;
  std::vector<long long> coeffs;  // term(n) = sum_j coeffs[j] * term(n-1-j)
  long long min = 0;
  long long max = 0;

  static SequenceSpec fibonacci(long long min, long long max);
  static SequenceSpec lucas(long long min, long long max);
  static SequenceSpec tribonacci(long long min, long long max);
  static SequenceSpec custom(std::vector<long long> initial,
                             std::vector<long long> coeffs,
                             long long min, long long max);

  // 1-based term of the full sequence (ignores the range window).
  long long term(int n) const;

  // All terms inside [min, max], ascending. Throws if a term in range would
  // exceed the OAM label bound, or if the sequence is not strictly increasing
  // where it intersects the range.
  std::vector<long long> generate() const;

  // Indices n with term(n) within [min, max], ascending.
  std::vector<int> indices_in_range() const;

  bool in_range(long long v) const { return v >= min && v <= max; }

  void validate() const;

  bool operator==(const SequenceSpec&) const = default;
};

std::string to_string(SequenceKind k);

// (count of Fibonacci numbers in [min, max]) / (count of integers in [min, max]),
// with the F1 = 1, F2 = 2 convention.
Rational fibonacci_fraction(long long min, long long max);

}  // namespace oam
