#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "napmon/bdd.hpp"
#include "napmon/bounds.hpp"
#include "napmon/data.hpp"
#include "napmon/network.hpp"
#include "napmon/thresholds.hpp"

namespace napmon {

enum class MonitorType { MinMax, Pattern };

std::string_view to_string(MonitorType type) noexcept;
MonitorType parse_monitor_type(std::string_view name);

inline constexpr unsigned kMaxBitsPerNeuron = 16;

/// What to monitor and how robustly.
///
/// Layer numbering follows Network: the monitored layer_k is in 1..depth and
/// the perturbation layer layer_kp is in 0..layer_k-1 (0 = network input).
/// neuron_indices are 0-based positions in the output of layer_k; an empty
/// list means every neuron. Pattern monitors need one list of
/// 2^bits_per_neuron - 1 strictly increasing thresholds per monitored neuron.
struct MonitorConfig {
  std::size_t layer_k = 1;
  std::size_t layer_kp = 0;
  double delta = 0.0;
  std::vector<std::size_t> neuron_indices;
  unsigned bits_per_neuron = 1;
  std::vector<ThresholdList> thresholds;

  friend bool operator==(const MonitorConfig&, const MonitorConfig&) = default;
};

/// Self-consistency checks that need no network. Throws ConfigError.
void validate_config(const MonitorConfig& config, MonitorType type);

/// Fills an empty neuron list with every neuron of layer_k, then checks the
/// config against the network and the monitor type. Throws ConfigError.
MonitorConfig resolve_config(const MonitorConfig& config, const Network& net, MonitorType type);

/// How pattern-monitor thresholds are chosen.
struct ThresholdScheme {
  enum class Kind { Explicit, Zero, Quantile };

  Kind kind = Kind::Zero;
  std::vector<double> probabilities;  // Quantile: strictly increasing in (0, 1)
  std::vector<ThresholdList> values;  // Explicit: one list per monitored neuron

  static ThresholdScheme zero() { return {}; }
  static ThresholdScheme quantile(std::vector<double> p) { return {Kind::Quantile, std::move(p), {}}; }
  static ThresholdScheme explicit_values(std::vector<ThresholdList> v) {
    return {Kind::Explicit, {}, std::move(v)};
  }
};

/// Per-neuron thresholds for `config` (its neuron list and bit width are used).
///
/// Zero gives the single cut 0 and requires bits_per_neuron == 1. Quantile
/// takes nearest-rank empirical quantiles of the unperturbed layer-k
/// activations over `data`: the p-quantile of n sorted values is the
/// ceil(p * n)-th smallest. Quantiles that collide are nudged upward to the
/// next representable double.
std::vector<ThresholdList> resolve_thresholds(const Network& net, const Dataset& data,
                                              const MonitorConfig& config,
                                              const ThresholdScheme& scheme);

/// Outcome of evaluating one input.
struct Verdict {
  bool warning = false;
  /// Min-max monitors: layer-k indices of every neuron outside its envelope.
  std::vector<std::size_t> violating_neurons;
  /// Pattern monitors: code of each monitored neuron, in monitoring order.
  std::vector<std::uint32_t> observed_code;
};

/// Per-neuron envelope [lower_j, upper_j] over all (perturbed) training
/// features. Starts empty as (+inf, -inf).
class MinMaxMonitor {
 public:
  /// Expects a config already passed through resolve_config.
  MinMaxMonitor(MonitorConfig config, std::string network_fingerprint);
  MinMaxMonitor(MonitorConfig config, std::string network_fingerprint, std::vector<double> lower,
                std::vector<double> upper);

  const MonitorConfig& config() const noexcept { return config_; }
  const std::string& network_fingerprint() const noexcept { return fingerprint_; }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  bool empty() const noexcept;

  /// Joins the monitored coordinates of a full layer-k box into the envelope.
  void insert(const BoundsVector& layer_bounds);
  /// Joins one exact layer-k feature vector.
  void insert_point(std::span<const double> layer_features);

  /// Warns iff some monitored neuron is strictly below lower or strictly
  /// above upper. `layer_features` is the full layer-k output.
  Verdict evaluate_features(std::span<const double> layer_features) const;

  friend bool operator==(const MinMaxMonitor&, const MinMaxMonitor&) = default;

 private:
  MonitorConfig config_;
  std::string fingerprint_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Set of admissible code words stored as a BDD over
/// |neuron_indices| * bits_per_neuron variables, plus the deduplicated list
/// of cubes that produced it.
///
/// Copies share the BDD manager. Monitors built into the same manager can be
/// compared by root id.
class PatternMonitor {
 public:
  /// Expects a config already passed through resolve_config. A null manager
  /// creates a fresh one; a supplied manager must have the right variable count.
  PatternMonitor(MonitorConfig config, std::string network_fingerprint,
                 std::shared_ptr<bdd::Manager> manager = nullptr);

  const MonitorConfig& config() const noexcept { return config_; }
  const std::string& network_fingerprint() const noexcept { return fingerprint_; }
  const bdd::Manager& manager() const noexcept { return *manager_; }
  const std::shared_ptr<bdd::Manager>& shared_manager() const noexcept { return manager_; }
  bdd::NodeId root() const noexcept { return root_; }
  const std::vector<bdd::CodeCube>& cubes() const noexcept { return cubes_; }

  /// Adds every word of the cube. Returns false when the exact cube was
  /// already present (nothing changes).
  bool insert_cube(const bdd::CodeCube& cube);
  /// Adds the cube of code ranges of a full layer-k box.
  bool insert(const BoundsVector& layer_bounds);
  /// Adds the single word of an exact layer-k feature vector.
  bool insert_point(std::span<const double> layer_features);

  bdd::CodeCube cube_of(const BoundsVector& layer_bounds) const;
  std::vector<std::uint32_t> codes_of(std::span<const double> layer_features) const;

  /// Warns iff the code word of the features is not in the set.
  Verdict evaluate_features(std::span<const double> layer_features) const;

  bool contains_word(const bdd::Word& word) const { return manager_->contains(root_, word); }
  bdd::WordCount pattern_count() const { return manager_->count_words(root_); }

 private:
  MonitorConfig config_;
  std::string fingerprint_;
  std::shared_ptr<bdd::Manager> manager_;
  bdd::NodeId root_ = bdd::kFalse;
  std::vector<bdd::CodeCube> cubes_;
  std::set<bdd::CodeCube> seen_;
};

/// Same config, same network and the same set of words.
bool equivalent(const PatternMonitor& a, const PatternMonitor& b);

using AnyMonitor = std::variant<MinMaxMonitor, PatternMonitor>;

MonitorType type_of(const AnyMonitor& m) noexcept;
const MonitorConfig& config_of(const AnyMonitor& m) noexcept;
const std::string& fingerprint_of(const AnyMonitor& m) noexcept;

/// Robust min-max build: joins perturbation_estimate(v, k, k_p, delta) over
/// every sample. With delta == 0 this is the plain min/max envelope.
MinMaxMonitor build_minmax(const Network& net, const Dataset& data, const MonitorConfig& config);

/// Plain envelope of exact layer-k features; the stored config has delta 0.
MinMaxMonitor build_minmax_standard(const Network& net, const Dataset& data,
                                    const MonitorConfig& config);

/// Robust pattern build: each sample contributes the cube of code ranges of
/// its perturbation estimate.
PatternMonitor build_pattern(const Network& net, const Dataset& data, const MonitorConfig& config,
                             std::shared_ptr<bdd::Manager> manager = nullptr);

/// Each sample contributes the single code word of its exact features; the
/// stored config has delta 0.
PatternMonitor build_pattern_standard(const Network& net, const Dataset& data,
                                      const MonitorConfig& config,
                                      std::shared_ptr<bdd::Manager> manager = nullptr);

AnyMonitor build_monitor(MonitorType type, const Network& net, const Dataset& data,
                         const MonitorConfig& config);

/// Continues the build loop of `m` over more samples. Throws
/// FingerprintMismatch if `net` is not the network `m` was built on.
MinMaxMonitor extend(const MinMaxMonitor& m, const Network& net, const Dataset& more);
PatternMonitor extend(const PatternMonitor& m, const Network& net, const Dataset& more);
AnyMonitor extend(const AnyMonitor& m, const Network& net, const Dataset& more);

/// Evaluates an input on the unperturbed network. Throws FingerprintMismatch
/// if `net` is not the network the monitor was built on.
Verdict evaluate(const MinMaxMonitor& m, const Network& net, std::span<const double> input);
Verdict evaluate(const PatternMonitor& m, const Network& net, std::span<const double> input);
Verdict evaluate(const AnyMonitor& m, const Network& net, std::span<const double> input);

}  // namespace napmon
