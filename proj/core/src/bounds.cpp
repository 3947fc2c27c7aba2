#include "napmon/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "napmon/error.hpp"

namespace napmon {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("interval endpoints must be finite");
  if (lo > hi) {
    throw ConfigError("interval lower end " + std::to_string(lo) + " exceeds upper end " +
                      std::to_string(hi));
  }
}

BoundsVector widen(std::span<const double> v, double delta, std::size_t layer) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ConfigError("perturbation radius must be a finite nonnegative number");
  }
  BoundsVector out{{}, layer};
  out.intervals.reserve(v.size());
  for (double x : v) out.intervals.emplace_back(x - delta, x + delta);
  return out;
}

BoundsVector affine_bounds(const Layer& layer, const BoundsVector& in) {
  if (in.size() != layer.cols()) {
    throw DimensionError("affine bounds: layer expects " + std::to_string(layer.cols()) +
                         " inputs, box has " + std::to_string(in.size()));
  }
  BoundsVector out{{}, in.layer + 1};
  out.intervals.reserve(layer.rows());
  const auto bias = layer.bias();
  for (std::size_t r = 0; r < layer.rows(); ++r) {
    const auto w = layer.row(r);
    // Same accumulation order as Layer::apply, so a point box reproduces the
    // forward pass bit for bit.
    double lo = bias[r];
    double hi = bias[r];
    for (std::size_t c = 0; c < w.size(); ++c) {
      const double a = w[c] * in[c].lo();
      const double b = w[c] * in[c].hi();
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    out.intervals.emplace_back(lo, hi);
  }
  return out;
}

BoundsVector activation_bounds(Activation act, const BoundsVector& in) {
  BoundsVector out{{}, in.layer};
  out.intervals.reserve(in.size());
  for (const auto& iv : in.intervals) {
    out.intervals.emplace_back(activate(act, iv.lo()), activate(act, iv.hi()));
  }
  return out;
}

BoundsVector perturbation_estimate(const Network& net, std::span<const double> v, std::size_t k,
                                   std::size_t k_p, double delta) {
  if (k_p >= k || k > net.depth()) {
    throw ConfigError("perturbation estimate needs 0 <= k_p < k <= " + std::to_string(net.depth()) +
                      ", got k=" + std::to_string(k) + " k_p=" + std::to_string(k_p));
  }
  if (!(delta >= 0.0)) throw ConfigError("perturbation radius must be nonnegative");
  const ActivationVector z = net.forward(v, k_p);
  BoundsVector box = widen(z.values, delta, k_p);
  for (std::size_t l = k_p + 1; l <= k; ++l) {
    const Layer& layer = net.layer(l);
    box = activation_bounds(layer.activation(), affine_bounds(layer, box));
  }
  return box;
}

BoundsVector interval_join(const BoundsVector& a, const BoundsVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("cannot join bounds of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  BoundsVector out{{}, a.layer};
  out.intervals.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    out.intervals.emplace_back(std::min(a[j].lo(), b[j].lo()), std::max(a[j].hi(), b[j].hi()));
  }
  return out;
}

}  // namespace napmon
