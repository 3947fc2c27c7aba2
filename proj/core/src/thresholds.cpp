#include "napmon/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "napmon/error.hpp"

namespace napmon {

Threshold Threshold::finite(double v) {
  if (!std::isfinite(v)) throw ConfigError("finite threshold expected; use an unbounded marker");
  return Threshold(Kind::Finite, v);
}

std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) noexcept {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ != Threshold::Kind::Finite) return std::strong_ordering::equal;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ThresholdList finite_thresholds(std::span<const double> values) {
  ThresholdList out;
  out.reserve(values.size());
  for (double v : values) out.push_back(Threshold::finite(v));
  return out;
}

void validate_thresholds(std::span<const Threshold> cuts) {
  if (cuts.empty()) throw ConfigError("threshold list is empty");
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i - 1] < cuts[i])) {
      throw ConfigError("thresholds must be strictly increasing (position " + std::to_string(i) + ")");
    }
  }
}

std::uint32_t code_of(double value, std::span<const Threshold> cuts) {
  validate_thresholds(cuts);
  const auto it =
      std::partition_point(cuts.begin(), cuts.end(), [value](const Threshold& c) { return c.below(value); });
  return static_cast<std::uint32_t>(it - cuts.begin());
}

bdd::CodeRange code_range_of(double lo, double hi, std::span<const Threshold> cuts) {
  if (!(lo <= hi)) {
    throw ConfigError("bound lower end " + std::to_string(lo) + " exceeds upper end " + std::to_string(hi));
  }
  return {code_of(lo, cuts), code_of(hi, cuts)};
}

bdd::Word code_word(std::span<const std::uint32_t> codes, unsigned bits) {
  bdd::Word word;
  word.reserve(codes.size() * bits);
  for (std::uint32_t code : codes) {
    for (unsigned b = bits; b-- > 0;) word.push_back(((code >> b) & 1U) != 0);
  }
  return word;
}

}  // namespace napmon
