#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <sstream>

namespace napmon::cli {

namespace {

std::string number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

}  // namespace

MonitorSummary summarize(const AnyMonitor& monitor) {
  MonitorSummary s;
  s.type = type_of(monitor);
  s.network_fingerprint = fingerprint_of(monitor);
  s.config = config_of(monitor);
  if (const auto* pm = std::get_if<PatternMonitor>(&monitor)) {
    s.cube_count = pm->cubes().size();
    s.pattern_count = pm->pattern_count().str();
  } else {
    const auto& mm = std::get<MinMaxMonitor>(monitor);
    if (!mm.empty()) {
      s.width_min = std::numeric_limits<double>::infinity();
      s.width_max = -std::numeric_limits<double>::infinity();
      double sum = 0.0;
      for (std::size_t j = 0; j < mm.lower().size(); ++j) {
        const double w = mm.upper()[j] - mm.lower()[j];
        s.width_min = std::min(s.width_min, w);
        s.width_max = std::max(s.width_max, w);
        sum += w;
      }
      s.width_mean = sum / static_cast<double>(mm.lower().size());
    }
  }
  return s;
}

std::string format_summary(const MonitorSummary& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream out;
  out << pad << "type: " << to_string(s.type) << "\n";
  out << pad << "network_fingerprint: " << s.network_fingerprint << "\n";
  out << pad << "layer_k: " << s.config.layer_k << "\n";
  out << pad << "layer_kp: " << s.config.layer_kp << "\n";
  out << pad << "delta: " << number(s.config.delta) << "\n";
  out << pad << "neuron_indices: " << join_indices(s.config.neuron_indices) << "\n";
  if (s.type == MonitorType::Pattern) {
    out << pad << "bits_per_neuron: " << s.config.bits_per_neuron << "\n";
    out << pad << "cubes: " << s.cube_count << "\n";
    out << pad << "patterns: " << s.pattern_count << "\n";
  } else {
    out << pad << "envelope_width_min: " << number(s.width_min) << "\n";
    out << pad << "envelope_width_mean: " << number(s.width_mean) << "\n";
    out << pad << "envelope_width_max: " << number(s.width_max) << "\n";
  }
  return out.str();
}

std::string format_report(const Report& report) {
  std::ostringstream out;
  out << "monitor:\n" << format_summary(report.monitor, 2);
  out << "evaluations:\n";
  for (const auto& e : report.evaluations) {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f", e.warning_rate());
    out << "  - dataset: " << e.dataset << "\n";
    out << "    total: " << e.total << "\n";
    out << "    warnings: " << e.warnings << "\n";
    out << "    warning_rate: " << rate << "\n";
  }
  return out.str();
}

}  // namespace napmon::cli
