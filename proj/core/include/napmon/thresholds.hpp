#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "napmon/bdd.hpp"
#include "napmon/bounds.hpp"

namespace napmon {

/// A cut point between two neighbouring code intervals. Besides finite values
/// it can be an unbounded marker at either end, which is compared symbolically
/// and never enters arithmetic.
class Threshold {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  static Threshold finite(double v);
  static constexpr Threshold neg_inf() noexcept { return Threshold(Kind::NegInf, 0.0); }
  static constexpr Threshold pos_inf() noexcept { return Threshold(Kind::PosInf, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  double value() const noexcept { return value_; }

  /// True iff v lies strictly above this cut point.
  bool below(double v) const noexcept {
    switch (kind_) {
      case Kind::NegInf:
        return true;
      case Kind::PosInf:
        return false;
      case Kind::Finite:
        break;
    }
    return v > value_;
  }

  friend bool operator==(const Threshold&, const Threshold&) = default;
  friend std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) noexcept;

 private:
  constexpr Threshold(Kind kind, double value) noexcept : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

using ThresholdList = std::vector<Threshold>;

ThresholdList finite_thresholds(std::span<const double> values);

/// Throws ConfigError unless the list is non-empty and strictly increasing.
void validate_thresholds(std::span<const Threshold> cuts);

/// Index of the interval containing value, where interval 0 is (-inf, c_1],
/// interval i is (c_i, c_{i+1}] and the last is (c_m, inf). Equivalently the
/// number of cut points strictly below value.
std::uint32_t code_of(double value, std::span<const Threshold> cuts);

/// Codes of every interval that [lo, hi] intersects: [code_of(lo), code_of(hi)].
bdd::CodeRange code_range_of(double lo, double hi, std::span<const Threshold> cuts);
inline bdd::CodeRange code_range_of(const Interval& bound, std::span<const Threshold> cuts) {
  return code_range_of(bound.lo(), bound.hi(), cuts);
}

/// Concatenates the big-endian `bits`-wide encodings of `codes`.
bdd::Word code_word(std::span<const std::uint32_t> codes, unsigned bits);

}  // namespace napmon
