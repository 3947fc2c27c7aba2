#include "napmon/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "napmon/error.hpp"

namespace napmon {

std::string_view to_string(MonitorType type) noexcept {
  return type == MonitorType::MinMax ? "minmax" : "pattern";
}

MonitorType parse_monitor_type(std::string_view name) {
  if (name == "minmax") return MonitorType::MinMax;
  if (name == "pattern") return MonitorType::Pattern;
  throw ConfigError("unknown monitor type '" + std::string(name) + "'");
}

void validate_config(const MonitorConfig& config, MonitorType type) {
  if (config.layer_k == 0) throw ConfigError("monitored layer must be at least 1");
  if (config.layer_kp >= config.layer_k) {
    throw ConfigError("perturbation layer " + std::to_string(config.layer_kp) +
                      " must be below monitored layer " + std::to_string(config.layer_k));
  }
  if (!std::isfinite(config.delta) || config.delta < 0.0) {
    throw ConfigError("delta must be a finite nonnegative number");
  }
  for (std::size_t i = 1; i < config.neuron_indices.size(); ++i) {
    if (config.neuron_indices[i - 1] >= config.neuron_indices[i]) {
      throw ConfigError("neuron indices must be sorted and distinct");
    }
  }
  if (config.bits_per_neuron == 0 || config.bits_per_neuron > kMaxBitsPerNeuron) {
    throw ConfigError("bits per neuron must be in 1.." + std::to_string(kMaxBitsPerNeuron));
  }
  if (type != MonitorType::Pattern) return;

  if (!config.neuron_indices.empty() && config.thresholds.size() != config.neuron_indices.size()) {
    throw ConfigError("expected one threshold list per monitored neuron (" +
                      std::to_string(config.neuron_indices.size()) + "), got " +
                      std::to_string(config.thresholds.size()));
  }
  const std::size_t per_neuron = (std::size_t{1} << config.bits_per_neuron) - 1;
  for (std::size_t j = 0; j < config.thresholds.size(); ++j) {
    if (config.thresholds[j].size() != per_neuron) {
      throw ConfigError("neuron " + std::to_string(j) + " has " +
                        std::to_string(config.thresholds[j].size()) + " thresholds, " +
                        std::to_string(config.bits_per_neuron) + " bits need " +
                        std::to_string(per_neuron));
    }
    validate_thresholds(config.thresholds[j]);
  }
}

MonitorConfig resolve_config(const MonitorConfig& config, const Network& net, MonitorType type) {
  MonitorConfig out = config;
  if (out.layer_k == 0 || out.layer_k > net.depth()) {
    throw ConfigError("monitored layer " + std::to_string(out.layer_k) + " out of range 1.." +
                      std::to_string(net.depth()));
  }
  const std::size_t width = net.dim(out.layer_k);
  if (out.neuron_indices.empty()) {
    out.neuron_indices.resize(width);
    for (std::size_t j = 0; j < width; ++j) out.neuron_indices[j] = j;
  }
  if (out.neuron_indices.back() >= width) {
    throw ConfigError("neuron index " + std::to_string(out.neuron_indices.back()) +
                      " out of range for layer " + std::to_string(out.layer_k) + " of width " +
                      std::to_string(width));
  }
  validate_config(out, type);
  if (type == MonitorType::Pattern && out.thresholds.size() != out.neuron_indices.size()) {
    throw ConfigError("expected one threshold list per monitored neuron (" +
                      std::to_string(out.neuron_indices.size()) + "), got " +
                      std::to_string(out.thresholds.size()));
  }
  return out;
}

namespace {

void check_dataset(const Network& net, const Dataset& data, bool allow_empty) {
  if (data.empty()) {
    if (allow_empty) return;
    throw ConfigError("dataset is empty");
  }
  if (data.dim() != net.input_dim()) {
    throw DimensionError("dataset rows have length " + std::to_string(data.dim()) +
                         ", network expects " + std::to_string(net.input_dim()));
  }
}

void check_fingerprint(const std::string& recorded, const Network& net) {
  if (recorded != net.fingerprint()) {
    throw FingerprintMismatch("monitor was built for network " + recorded + ", got " +
                              net.fingerprint());
  }
}

}  // namespace

std::vector<ThresholdList> resolve_thresholds(const Network& net, const Dataset& data,
                                              const MonitorConfig& config,
                                              const ThresholdScheme& scheme) {
  const MonitorConfig cfg = resolve_config(config, net, MonitorType::MinMax);
  const std::size_t per_neuron = (std::size_t{1} << cfg.bits_per_neuron) - 1;
  const std::size_t n = cfg.neuron_indices.size();

  switch (scheme.kind) {
    case ThresholdScheme::Kind::Explicit: {
      if (scheme.values.size() != n) {
        throw ConfigError("explicit thresholds: expected " + std::to_string(n) + " lists, got " +
                          std::to_string(scheme.values.size()));
      }
      for (const auto& list : scheme.values) {
        if (list.size() != per_neuron) {
          throw ConfigError("explicit thresholds: expected " + std::to_string(per_neuron) +
                            " values per neuron, got " + std::to_string(list.size()));
        }
        validate_thresholds(list);
      }
      return scheme.values;
    }
    case ThresholdScheme::Kind::Zero:
      if (cfg.bits_per_neuron != 1) throw ConfigError("zero thresholds require 1 bit per neuron");
      return std::vector<ThresholdList>(n, ThresholdList{Threshold::finite(0.0)});
    case ThresholdScheme::Kind::Quantile:
      break;
  }

  const auto& p = scheme.probabilities;
  if (p.size() != per_neuron) {
    throw ConfigError("quantile thresholds: " + std::to_string(cfg.bits_per_neuron) + " bits need " +
                      std::to_string(per_neuron) + " probabilities, got " + std::to_string(p.size()));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] < 1.0)) throw ConfigError("quantile probabilities must lie in (0, 1)");
    if (i > 0 && !(p[i - 1] < p[i])) throw ConfigError("quantile probabilities must be strictly increasing");
  }
  check_dataset(net, data, false);

  std::vector<std::vector<double>> columns(n);
  for (auto& c : columns) c.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto features = net.forward(data.row(i), cfg.layer_k);
    for (std::size_t j = 0; j < n; ++j) columns[j].push_back(features.values[cfg.neuron_indices[j]]);
  }
  std::vector<ThresholdList> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& col = columns[j];
    std::sort(col.begin(), col.end());
    const double count = static_cast<double>(col.size());
    double prev = -std::numeric_limits<double>::infinity();
    for (double q : p) {
      auto rank = static_cast<std::size_t>(std::ceil(q * count));
      rank = std::clamp<std::size_t>(rank, 1, col.size());
      double value = col[rank - 1];
      if (value <= prev) value = std::nextafter(prev, std::numeric_limits<double>::infinity());
      out[j].push_back(Threshold::finite(value));
      prev = value;
    }
  }
  return out;
}

// -- MinMaxMonitor -----------------------------------------------------------

MinMaxMonitor::MinMaxMonitor(MonitorConfig config, std::string network_fingerprint)
    : config_(std::move(config)),
      fingerprint_(std::move(network_fingerprint)),
      lower_(config_.neuron_indices.size(), std::numeric_limits<double>::infinity()),
      upper_(config_.neuron_indices.size(), -std::numeric_limits<double>::infinity()) {
  validate_config(config_, MonitorType::MinMax);
}

MinMaxMonitor::MinMaxMonitor(MonitorConfig config, std::string network_fingerprint,
                             std::vector<double> lower, std::vector<double> upper)
    : config_(std::move(config)),
      fingerprint_(std::move(network_fingerprint)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  validate_config(config_, MonitorType::MinMax);
  if (lower_.size() != config_.neuron_indices.size() || upper_.size() != lower_.size()) {
    throw DimensionError("envelope length does not match the monitored neuron count");
  }
  const bool is_empty = empty();
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    const bool unset = lower_[j] == std::numeric_limits<double>::infinity() &&
                       upper_[j] == -std::numeric_limits<double>::infinity();
    if (is_empty != unset) throw ConfigError("envelope mixes set and unset neurons");
    if (!unset && !(std::isfinite(lower_[j]) && std::isfinite(upper_[j]) && lower_[j] <= upper_[j])) {
      throw ConfigError("envelope entry " + std::to_string(j) + " is not a finite interval");
    }
  }
}

bool MinMaxMonitor::empty() const noexcept {
  return lower_.empty() || (lower_[0] == std::numeric_limits<double>::infinity() &&
                            upper_[0] == -std::numeric_limits<double>::infinity());
}

void MinMaxMonitor::insert(const BoundsVector& layer_bounds) {
  const auto& idx = config_.neuron_indices;
  if (!idx.empty() && idx.back() >= layer_bounds.size()) {
    throw DimensionError("layer bounds have " + std::to_string(layer_bounds.size()) +
                         " entries, monitor needs index " + std::to_string(idx.back()));
  }
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Interval& b = layer_bounds[idx[j]];
    lower_[j] = std::min(lower_[j], b.lo());
    upper_[j] = std::max(upper_[j], b.hi());
  }
}

void MinMaxMonitor::insert_point(std::span<const double> layer_features) {
  const auto& idx = config_.neuron_indices;
  if (!idx.empty() && idx.back() >= layer_features.size()) {
    throw DimensionError("feature vector too short for the monitored neurons");
  }
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double v = layer_features[idx[j]];
    lower_[j] = std::min(lower_[j], v);
    upper_[j] = std::max(upper_[j], v);
  }
}

Verdict MinMaxMonitor::evaluate_features(std::span<const double> layer_features) const {
  const auto& idx = config_.neuron_indices;
  if (!idx.empty() && idx.back() >= layer_features.size()) {
    throw DimensionError("feature vector too short for the monitored neurons");
  }
  Verdict verdict;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double v = layer_features[idx[j]];
    if (v < lower_[j] || v > upper_[j]) verdict.violating_neurons.push_back(idx[j]);
  }
  verdict.warning = !verdict.violating_neurons.empty();
  return verdict;
}

// -- PatternMonitor ----------------------------------------------------------

PatternMonitor::PatternMonitor(MonitorConfig config, std::string network_fingerprint,
                               std::shared_ptr<bdd::Manager> manager)
    : config_(std::move(config)), fingerprint_(std::move(network_fingerprint)), manager_(std::move(manager)) {
  validate_config(config_, MonitorType::Pattern);
  if (config_.neuron_indices.empty()) throw ConfigError("pattern monitor needs a resolved neuron list");
  const std::size_t vars = config_.neuron_indices.size() * config_.bits_per_neuron;
  if (!manager_) {
    manager_ = std::make_shared<bdd::Manager>(vars);
  } else if (manager_->var_count() != vars) {
    throw ConfigError("shared BDD manager has " + std::to_string(manager_->var_count()) +
                      " variables, monitor needs " + std::to_string(vars));
  }
}

bool PatternMonitor::insert_cube(const bdd::CodeCube& cube) {
  if (seen_.contains(cube)) return false;
  root_ = manager_->insert_cube(root_, cube, config_.bits_per_neuron);
  seen_.insert(cube);
  cubes_.push_back(cube);
  return true;
}

bdd::CodeCube PatternMonitor::cube_of(const BoundsVector& layer_bounds) const {
  const auto& idx = config_.neuron_indices;
  if (idx.back() >= layer_bounds.size()) {
    throw DimensionError("layer bounds have " + std::to_string(layer_bounds.size()) +
                         " entries, monitor needs index " + std::to_string(idx.back()));
  }
  bdd::CodeCube cube;
  cube.reserve(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    cube.push_back(code_range_of(layer_bounds[idx[j]], config_.thresholds[j]));
  }
  return cube;
}

std::vector<std::uint32_t> PatternMonitor::codes_of(std::span<const double> layer_features) const {
  const auto& idx = config_.neuron_indices;
  if (idx.back() >= layer_features.size()) {
    throw DimensionError("feature vector too short for the monitored neurons");
  }
  std::vector<std::uint32_t> codes;
  codes.reserve(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    codes.push_back(code_of(layer_features[idx[j]], config_.thresholds[j]));
  }
  return codes;
}

bool PatternMonitor::insert(const BoundsVector& layer_bounds) { return insert_cube(cube_of(layer_bounds)); }

bool PatternMonitor::insert_point(std::span<const double> layer_features) {
  const auto codes = codes_of(layer_features);
  bdd::CodeCube cube;
  cube.reserve(codes.size());
  for (auto c : codes) cube.push_back({c, c});
  return insert_cube(cube);
}

Verdict PatternMonitor::evaluate_features(std::span<const double> layer_features) const {
  Verdict verdict;
  verdict.observed_code = codes_of(layer_features);
  verdict.warning = !manager_->contains(root_, code_word(verdict.observed_code, config_.bits_per_neuron));
  return verdict;
}

bool equivalent(const PatternMonitor& a, const PatternMonitor& b) {
  if (a.config() != b.config() || a.network_fingerprint() != b.network_fingerprint()) return false;
  if (a.shared_manager() == b.shared_manager()) return a.root() == b.root();
  bdd::Manager scratch(a.manager().var_count());
  bdd::NodeId ra = bdd::kFalse;
  bdd::NodeId rb = bdd::kFalse;
  for (const auto& c : a.cubes()) ra = scratch.insert_cube(ra, c, a.config().bits_per_neuron);
  for (const auto& c : b.cubes()) rb = scratch.insert_cube(rb, c, b.config().bits_per_neuron);
  return ra == rb;
}

MonitorType type_of(const AnyMonitor& m) noexcept {
  return std::holds_alternative<MinMaxMonitor>(m) ? MonitorType::MinMax : MonitorType::Pattern;
}

const MonitorConfig& config_of(const AnyMonitor& m) noexcept {
  return std::visit([](const auto& mon) -> const MonitorConfig& { return mon.config(); }, m);
}

const std::string& fingerprint_of(const AnyMonitor& m) noexcept {
  return std::visit([](const auto& mon) -> const std::string& { return mon.network_fingerprint(); }, m);
}

// -- build / extend / evaluate -----------------------------------------------

namespace {

template <class Monitor>
void robust_loop(Monitor& m, const Network& net, const Dataset& data) {
  const auto& cfg = m.config();
  for (std::size_t i = 0; i < data.size(); ++i) {
    m.insert(perturbation_estimate(net, data.row(i), cfg.layer_k, cfg.layer_kp, cfg.delta));
  }
}

template <class Monitor>
void standard_loop(Monitor& m, const Network& net, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    m.insert_point(net.forward(data.row(i), m.config().layer_k).values);
  }
}

}  // namespace

MinMaxMonitor build_minmax(const Network& net, const Dataset& data, const MonitorConfig& config) {
  MinMaxMonitor m(resolve_config(config, net, MonitorType::MinMax), net.fingerprint());
  check_dataset(net, data, false);
  robust_loop(m, net, data);
  return m;
}

MinMaxMonitor build_minmax_standard(const Network& net, const Dataset& data,
                                    const MonitorConfig& config) {
  MonitorConfig cfg = resolve_config(config, net, MonitorType::MinMax);
  cfg.delta = 0.0;
  MinMaxMonitor m(std::move(cfg), net.fingerprint());
  check_dataset(net, data, false);
  standard_loop(m, net, data);
  return m;
}

PatternMonitor build_pattern(const Network& net, const Dataset& data, const MonitorConfig& config,
                             std::shared_ptr<bdd::Manager> manager) {
  PatternMonitor m(resolve_config(config, net, MonitorType::Pattern), net.fingerprint(),
                   std::move(manager));
  check_dataset(net, data, false);
  robust_loop(m, net, data);
  return m;
}

PatternMonitor build_pattern_standard(const Network& net, const Dataset& data,
                                      const MonitorConfig& config,
                                      std::shared_ptr<bdd::Manager> manager) {
  MonitorConfig cfg = resolve_config(config, net, MonitorType::Pattern);
  cfg.delta = 0.0;
  PatternMonitor m(std::move(cfg), net.fingerprint(), std::move(manager));
  check_dataset(net, data, false);
  standard_loop(m, net, data);
  return m;
}

AnyMonitor build_monitor(MonitorType type, const Network& net, const Dataset& data,
                         const MonitorConfig& config) {
  if (type == MonitorType::MinMax) return build_minmax(net, data, config);
  return build_pattern(net, data, config);
}

MinMaxMonitor extend(const MinMaxMonitor& m, const Network& net, const Dataset& more) {
  check_fingerprint(m.network_fingerprint(), net);
  check_dataset(net, more, true);
  MinMaxMonitor out = m;
  robust_loop(out, net, more);
  return out;
}

PatternMonitor extend(const PatternMonitor& m, const Network& net, const Dataset& more) {
  check_fingerprint(m.network_fingerprint(), net);
  check_dataset(net, more, true);
  PatternMonitor out = m;
  robust_loop(out, net, more);
  return out;
}

AnyMonitor extend(const AnyMonitor& m, const Network& net, const Dataset& more) {
  return std::visit([&](const auto& mon) -> AnyMonitor { return extend(mon, net, more); }, m);
}

Verdict evaluate(const MinMaxMonitor& m, const Network& net, std::span<const double> input) {
  check_fingerprint(m.network_fingerprint(), net);
  return m.evaluate_features(net.forward(input, m.config().layer_k).values);
}

Verdict evaluate(const PatternMonitor& m, const Network& net, std::span<const double> input) {
  check_fingerprint(m.network_fingerprint(), net);
  return m.evaluate_features(net.forward(input, m.config().layer_k).values);
}

Verdict evaluate(const AnyMonitor& m, const Network& net, std::span<const double> input) {
  return std::visit([&](const auto& mon) { return evaluate(mon, net, input); }, m);
}

}  // namespace napmon
