#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "napmon/monitor.hpp"

namespace napmon {

inline constexpr int kMonitorFormatVersion = 1;

/// JSON monitor file:
///
///   {"format_version": 1, "monitor_type": "minmax" | "pattern",
///    "network_fingerprint": "...",
///    "config": {"layer_k", "layer_kp", "delta", "neuron_indices",
///               "bits_per_neuron", "thresholds"},
///    "payload": {"envelope": [[L, U], ...]} | {"cubes": [[[lo, hi], ...], ...]}}
///
/// Unbounded thresholds and empty-envelope entries are written as the strings
/// "-inf" / "inf". Numbers use the shortest round-trip decimal form, and the
/// layout is fixed, so equal monitors serialize to identical bytes. Pattern
/// payloads list cubes in insertion order; loading replays them into a fresh
/// BDD.
std::string to_json(const AnyMonitor& monitor);
AnyMonitor monitor_from_json(std::string_view text);

void save_monitor(const std::filesystem::path& path, const AnyMonitor& monitor);
AnyMonitor load_monitor(const std::filesystem::path& path);

/// Threshold file: a JSON array with one array of cut points per monitored
/// neuron; "-inf" / "inf" mark unbounded cuts.
std::vector<ThresholdList> thresholds_from_json(std::string_view text);
std::string thresholds_to_json(const std::vector<ThresholdList>& thresholds);

}  // namespace napmon
