#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "napmon/monitor.hpp"

namespace napmon::cli {

struct MonitorSummary {
  MonitorType type = MonitorType::MinMax;
  std::string network_fingerprint;
  MonitorConfig config;
  // pattern monitors
  std::size_t cube_count = 0;
  std::string pattern_count;
  // min-max monitors
  double width_min = 0.0;
  double width_mean = 0.0;
  double width_max = 0.0;
};

struct DatasetSummary {
  std::string dataset;
  std::size_t total = 0;
  std::size_t warnings = 0;

  double warning_rate() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(warnings) / static_cast<double>(total);
  }
};

struct Report {
  MonitorSummary monitor;
  std::vector<DatasetSummary> evaluations;
};

MonitorSummary summarize(const AnyMonitor& monitor);

/// Indented "key: value" document (a YAML subset). Rates are printed with six
/// decimals.
std::string format_report(const Report& report);
std::string format_summary(const MonitorSummary& summary, int indent);

}  // namespace napmon::cli
