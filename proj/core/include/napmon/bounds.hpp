#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "napmon/network.hpp"

namespace napmon {

/// Closed interval [lo, hi] with finite endpoints.
class Interval {
 public:
  Interval(double lo, double hi);
  static Interval point(double v) { return {v, v}; }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// Per-neuron boxes for one layer.
struct BoundsVector {
  std::vector<Interval> intervals;
  std::size_t layer = 0;

  std::size_t size() const noexcept { return intervals.size(); }
  const Interval& operator[](std::size_t j) const { return intervals[j]; }

  friend bool operator==(const BoundsVector&, const BoundsVector&) = default;
};

/// The L-infinity box of radius `delta` around v.
BoundsVector widen(std::span<const double> v, double delta, std::size_t layer = 0);

/// Interval image of a box under x -> W x + b (the layer's activation is not
/// applied). Tight for a single affine map.
BoundsVector affine_bounds(const Layer& layer, const BoundsVector& in);

/// Elementwise image of a box under a monotone activation.
BoundsVector activation_bounds(Activation act, const BoundsVector& in);

/// Box bounds on the layer-k output when the layer-k_p output of v is moved by
/// any perturbation with infinity norm at most `delta`. k_p == 0 perturbs the
/// input itself. Endpoints are not rounded outward.
BoundsVector perturbation_estimate(const Network& net, std::span<const double> v, std::size_t k,
                                   std::size_t k_p, double delta);

/// Coordinatewise hull.
BoundsVector interval_join(const BoundsVector& a, const BoundsVector& b);

}  // namespace napmon
