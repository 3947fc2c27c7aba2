#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "napmon/bdd.hpp"
#include "napmon/data.hpp"
#include "napmon/network.hpp"

namespace napmon::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -scale, scale);
  return v;
}

/// Dense network with the given widths (widths[0] = input dim).
inline Network random_network(Rng& rng, const std::vector<std::size_t>& widths,
                              Activation act = Activation::Relu) {
  std::vector<Layer> layers;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    const double scale = 1.5 / std::sqrt(static_cast<double>(widths[l - 1]));
    layers.emplace_back(widths[l], widths[l - 1], random_vector(rng, widths[l] * widths[l - 1], scale),
                        random_vector(rng, widths[l], 0.3), act);
  }
  return Network(widths[0], std::move(layers));
}

inline Network random_network(Rng& rng, std::size_t depth, std::size_t max_width,
                              Activation act = Activation::Relu) {
  std::vector<std::size_t> widths;
  for (std::size_t i = 0; i <= depth; ++i) widths.push_back(pick(rng, 1, max_width));
  return random_network(rng, widths, act);
}

inline Dataset random_dataset(Rng& rng, std::size_t rows, std::size_t dim, double scale = 1.0) {
  Dataset d(dim);
  for (std::size_t i = 0; i < rows; ++i) d.add_row(random_vector(rng, dim, scale));
  return d;
}

/// Uniform perturbation with every |delta_i| <= radius.
inline std::vector<double> perturb(Rng& rng, const std::vector<double>& z, double radius) {
  std::vector<double> out = z;
  for (auto& x : out) x += uniform(rng, -radius, radius);
  return out;
}

/// Exact min and max of w . x + b over the box, by visiting every corner.
inline std::pair<double, double> affine_corner_extremes(const std::vector<double>& w, double b,
                                                        const std::vector<double>& lo,
                                                        const std::vector<double>& hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  const std::size_t n = w.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double acc = b;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * (((mask >> i) & 1U) ? hi[i] : lo[i]);
    mn = std::min(mn, acc);
    mx = std::max(mx, acc);
  }
  return {mn, mx};
}

/// Reads a word as an integer, variable 0 most significant.
inline std::uint64_t word_index(const bdd::Word& w) {
  std::uint64_t v = 0;
  for (bool b : w) v = (v << 1) | (b ? 1U : 0U);
  return v;
}

inline bdd::Word index_word(std::uint64_t v, std::size_t bits) {
  bdd::Word w(bits);
  for (std::size_t i = 0; i < bits; ++i) w[bits - 1 - i] = ((v >> i) & 1U) != 0;
  return w;
}

/// Every concrete word of a cube, enumerated explicitly.
inline void expand_cube(const bdd::CodeCube& cube, unsigned bits, std::set<std::uint64_t>& out) {
  std::vector<std::uint64_t> acc{0};
  for (const auto& r : cube) {
    std::vector<std::uint64_t> next;
    for (auto prefix : acc) {
      for (std::uint64_t c = r.lo; c <= r.hi; ++c) next.push_back((prefix << bits) | c);
    }
    acc.swap(next);
  }
  out.insert(acc.begin(), acc.end());
}

inline bdd::CodeCube random_cube(Rng& rng, std::size_t neurons, unsigned bits) {
  const std::uint32_t max_code = (1U << bits) - 1;
  bdd::CodeCube c;
  for (std::size_t j = 0; j < neurons; ++j) {
    auto a = static_cast<std::uint32_t>(pick(rng, 0, max_code));
    auto b = static_cast<std::uint32_t>(pick(rng, 0, max_code));
    if (a > b) std::swap(a, b);
    c.push_back({a, b});
  }
  return c;
}

/// The two-bit robust encoding written out case by case with cut points
/// c1 < c2 < c3. Returns the set of admissible codes (00=0 ... 11=3).
inline std::set<std::uint32_t> two_bit_case_table(double l, double u, double c1, double c2, double c3) {
  if (l > c3) return {3};
  if (c3 >= u && u >= l && l >= c2) return {2};
  if (c2 > u && u >= l && l > c1) return {1};
  if (c1 >= u) return {0};
  if (c2 > u && u > c1 && c1 >= l) return {0, 1};
  if (c3 >= u && u >= c2 && c2 > l && l > c1) return {1, 2};
  if (u > c3 && c3 >= l && l >= c2) return {2, 3};
  if (c1 >= l && c3 >= u && u >= c2) return {0, 1, 2};
  if (u > c3 && c2 > l && l > c1) return {1, 2, 3};
  return {0, 1, 2, 3};
}

/// The two-bit standard encoding written out case by case.
inline std::uint32_t two_bit_point_table(double v, double c1, double c2, double c3) {
  if (v > c3) return 3;
  if (c3 >= v && v >= c2) return 2;
  if (c2 > v && v > c1) return 1;
  return 0;
}

}  // namespace napmon::testing
