#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "napmon/data.hpp"

namespace napmon {

/// xoshiro256** seeded through splitmix64.
///
/// uniform() takes the top 53 bits of next() scaled by 2^-53. normal() uses
/// the basic Box-Muller transform: with u1 = 1 - uniform() and u2 = uniform(),
/// it returns sqrt(-2 ln u1) * cos(2 pi u2) and discards the sine branch, so
/// every normal draw consumes exactly two 64-bit outputs.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
};

struct Cluster {
  std::vector<double> center;
  std::vector<double> spread;  // per-axis standard deviation
  std::size_t count = 0;       // rows drawn per split
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::vector<Cluster> clusters;
  std::vector<double> shift;  // added to every center for the OOD split; empty means zero

  /// Throws ConfigError on zero clusters, non-positive spreads or counts, or
  /// vectors whose length differs from dim.
  void validate() const;
};

/// JSON form: {"clusters": [{"center": [...], "spread": 0.5 | [...], "count": N}],
///             "shift": [...], "seed": N, "dim": N}. seed and dim are optional
/// here; dim falls back to the first center's length and shift to zeros.
SyntheticSpec parse_synthetic_spec(std::string_view text);

struct SyntheticSplits {
  Dataset train;
  Dataset held_out;
  Dataset ood;
};

/// Draws train, held-out and OOD rows, in that order, from one generator
/// stream. Within a split, clusters are visited in order and each contributes
/// `count` rows. Deterministic in the seed.
SyntheticSplits generate(const SyntheticSpec& spec);

}  // namespace napmon
