#include "napmon/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "json_util.hpp"
#include "napmon/error.hpp"

namespace napmon {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Xoshiro256::normal() noexcept {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SyntheticSpec::validate() const {
  if (dim == 0) throw ConfigError("synthetic dim must be positive");
  if (clusters.empty()) throw ConfigError("synthetic spec has no clusters");
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    const std::string at = "cluster " + std::to_string(c);
    if (cl.center.size() != dim) throw ConfigError(at + ": center length differs from dim");
    if (cl.spread.size() != dim) throw ConfigError(at + ": spread length differs from dim");
    if (cl.count == 0) throw ConfigError(at + ": count must be positive");
    for (double s : cl.spread) {
      if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError(at + ": spreads must be positive");
    }
    for (double x : cl.center) {
      if (!std::isfinite(x)) throw ConfigError(at + ": center must be finite");
    }
  }
  if (!shift.empty() && shift.size() != dim) throw ConfigError("shift length differs from dim");
}

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  using detail::json;
  const json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("<root>", "expected an object");
  SyntheticSpec spec;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("seed", "expected a nonnegative integer");
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("dim")) spec.dim = detail::index_value(doc["dim"], "dim");

  const json& jclusters = detail::member(doc, "clusters", "");
  if (!jclusters.is_array()) throw ParseError("clusters", "expected an array");
  for (std::size_t c = 0; c < jclusters.size(); ++c) {
    const std::string at = "clusters[" + std::to_string(c) + "]";
    const json& jc = jclusters[c];
    Cluster cl;
    const json& jcenter = detail::member(jc, "center", at);
    if (!jcenter.is_array()) throw ParseError(at + ".center", "expected an array");
    for (std::size_t i = 0; i < jcenter.size(); ++i) {
      cl.center.push_back(detail::finite_number(jcenter[i], at + ".center[" + std::to_string(i) + "]"));
    }
    const json& jspread = detail::member(jc, "spread", at);
    if (jspread.is_array()) {
      for (std::size_t i = 0; i < jspread.size(); ++i) {
        cl.spread.push_back(detail::finite_number(jspread[i], at + ".spread[" + std::to_string(i) + "]"));
      }
    } else {
      cl.spread.assign(cl.center.size(), detail::finite_number(jspread, at + ".spread"));
    }
    cl.count = detail::index_value(detail::member(jc, "count", at), at + ".count");
    spec.clusters.push_back(std::move(cl));
  }
  if (doc.contains("shift")) {
    const json& jshift = doc["shift"];
    if (!jshift.is_array()) throw ParseError("shift", "expected an array");
    for (std::size_t i = 0; i < jshift.size(); ++i) {
      spec.shift.push_back(detail::finite_number(jshift[i], "shift[" + std::to_string(i) + "]"));
    }
  }
  if (spec.dim == 0 && !spec.clusters.empty()) spec.dim = spec.clusters.front().center.size();
  return spec;
}

SyntheticSplits generate(const SyntheticSpec& spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  std::vector<double> row(spec.dim);
  auto draw = [&](bool shifted) {
    Dataset out(spec.dim);
    for (const auto& cl : spec.clusters) {
      for (std::size_t n = 0; n < cl.count; ++n) {
        for (std::size_t i = 0; i < spec.dim; ++i) {
          const double center =
              shifted && !spec.shift.empty() ? cl.center[i] + spec.shift[i] : cl.center[i];
          row[i] = center + cl.spread[i] * rng.normal();
        }
        out.add_row(row);
      }
    }
    return out;
  };
  SyntheticSplits splits;
  splits.train = draw(false);
  splits.held_out = draw(false);
  splits.ood = draw(true);
  return splits;
}

}  // namespace napmon
