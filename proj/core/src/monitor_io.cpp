#include "napmon/monitor_io.hpp"

#include <limits>
#include <string>

#include "json_util.hpp"
#include "napmon/error.hpp"

namespace napmon {

namespace {

using detail::json;

json threshold_json(const Threshold& t) {
  switch (t.kind()) {
    case Threshold::Kind::NegInf:
      return "-inf";
    case Threshold::Kind::PosInf:
      return "inf";
    case Threshold::Kind::Finite:
      break;
  }
  return t.value();
}

Threshold threshold_from(const json& j, const std::string& path) {
  const double v = detail::extended_number(j, path);
  if (v == -std::numeric_limits<double>::infinity()) return Threshold::neg_inf();
  if (v == std::numeric_limits<double>::infinity()) return Threshold::pos_inf();
  return Threshold::finite(v);
}

json thresholds_json(const std::vector<ThresholdList>& thresholds) {
  json out = json::array();
  for (const auto& list : thresholds) {
    json jl = json::array();
    for (const auto& t : list) jl.push_back(threshold_json(t));
    out.push_back(std::move(jl));
  }
  return out;
}

std::vector<ThresholdList> parse_thresholds(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of arrays");
  std::vector<ThresholdList> out;
  for (std::size_t n = 0; n < j.size(); ++n) {
    const std::string at = path + "[" + std::to_string(n) + "]";
    if (!j[n].is_array()) throw ParseError(at, "expected an array");
    ThresholdList list;
    for (std::size_t i = 0; i < j[n].size(); ++i) {
      list.push_back(threshold_from(j[n][i], at + "[" + std::to_string(i) + "]"));
    }
    out.push_back(std::move(list));
  }
  return out;
}

json config_json(const MonitorConfig& c) {
  // nlohmann::json objects keep keys sorted, which fixes the byte layout.
  json j;
  j["layer_k"] = c.layer_k;
  j["layer_kp"] = c.layer_kp;
  j["delta"] = c.delta;
  j["neuron_indices"] = c.neuron_indices;
  j["bits_per_neuron"] = c.bits_per_neuron;
  j["thresholds"] = thresholds_json(c.thresholds);
  return j;
}

MonitorConfig parse_config(const json& j, MonitorType type) {
  MonitorConfig c;
  c.layer_k = detail::index_value(detail::member(j, "layer_k", "config"), "config.layer_k");
  c.layer_kp = detail::index_value(detail::member(j, "layer_kp", "config"), "config.layer_kp");
  c.delta = detail::finite_number(detail::member(j, "delta", "config"), "config.delta");
  const json& jidx = detail::member(j, "neuron_indices", "config");
  if (!jidx.is_array()) throw ParseError("config.neuron_indices", "expected an array");
  for (std::size_t i = 0; i < jidx.size(); ++i) {
    c.neuron_indices.push_back(
        detail::index_value(jidx[i], "config.neuron_indices[" + std::to_string(i) + "]"));
  }
  const std::size_t bits =
      detail::index_value(detail::member(j, "bits_per_neuron", "config"), "config.bits_per_neuron");
  if (bits > kMaxBitsPerNeuron) throw ParseError("config.bits_per_neuron", "too large");
  c.bits_per_neuron = static_cast<unsigned>(bits);
  c.thresholds = parse_thresholds(detail::member(j, "thresholds", "config"), "config.thresholds");
  try {
    validate_config(c, type);
  } catch (const ConfigError& e) {
    throw ParseError("config", e.what());
  }
  if (c.neuron_indices.empty()) throw ParseError("config.neuron_indices", "empty neuron list");
  return c;
}

}  // namespace

std::string to_json(const AnyMonitor& monitor) {
  const MonitorConfig& cfg = config_of(monitor);
  std::string out = "{\n";
  out += "  \"format_version\": " + std::to_string(kMonitorFormatVersion) + ",\n";
  out += "  \"monitor_type\": " + json(std::string(to_string(type_of(monitor)))).dump() + ",\n";
  out += "  \"network_fingerprint\": " + json(fingerprint_of(monitor)).dump() + ",\n";
  out += "  \"config\": " + config_json(cfg).dump() + ",\n";
  out += "  \"payload\": {\n";
  if (const auto* mm = std::get_if<MinMaxMonitor>(&monitor)) {
    out += "    \"envelope\": [";
    for (std::size_t j = 0; j < mm->lower().size(); ++j) {
      out += j ? ",\n      " : "\n      ";
      json pair = json::array(
          {detail::extended_number_json(mm->lower()[j]), detail::extended_number_json(mm->upper()[j])});
      out += pair.dump();
    }
    out += mm->lower().empty() ? "]\n" : "\n    ]\n";
  } else {
    const auto& pm = std::get<PatternMonitor>(monitor);
    out += "    \"cubes\": [";
    for (std::size_t c = 0; c < pm.cubes().size(); ++c) {
      out += c ? ",\n      " : "\n      ";
      json cube = json::array();
      for (const auto& r : pm.cubes()[c]) cube.push_back(json::array({r.lo, r.hi}));
      out += cube.dump();
    }
    out += pm.cubes().empty() ? "]\n" : "\n    ]\n";
  }
  out += "  }\n}\n";
  return out;
}

AnyMonitor monitor_from_json(std::string_view text) {
  const json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("<root>", "expected an object");
  const json& jver = detail::member(doc, "format_version", "");
  if (!jver.is_number_integer() || jver.get<int>() != kMonitorFormatVersion) {
    throw ParseError("format_version", "unsupported monitor format version");
  }
  const json& jtype = detail::member(doc, "monitor_type", "");
  if (!jtype.is_string()) throw ParseError("monitor_type", "expected a string");
  MonitorType type;
  try {
    type = parse_monitor_type(jtype.get<std::string>());
  } catch (const ConfigError& e) {
    throw ParseError("monitor_type", e.what());
  }
  const json& jfp = detail::member(doc, "network_fingerprint", "");
  if (!jfp.is_string()) throw ParseError("network_fingerprint", "expected a string");
  std::string fingerprint = jfp.get<std::string>();

  MonitorConfig cfg = parse_config(detail::member(doc, "config", ""), type);
  const json& payload = detail::member(doc, "payload", "");

  if (type == MonitorType::MinMax) {
    const json& env = detail::member(payload, "envelope", "payload");
    if (!env.is_array()) throw ParseError("payload.envelope", "expected an array");
    if (env.size() != cfg.neuron_indices.size()) {
      throw ParseError("payload.envelope", "expected one pair per monitored neuron");
    }
    std::vector<double> lower, upper;
    for (std::size_t j = 0; j < env.size(); ++j) {
      const std::string at = "payload.envelope[" + std::to_string(j) + "]";
      if (!env[j].is_array() || env[j].size() != 2) throw ParseError(at, "expected a [lower, upper] pair");
      lower.push_back(detail::extended_number(env[j][0], at + "[0]"));
      upper.push_back(detail::extended_number(env[j][1], at + "[1]"));
    }
    try {
      return MinMaxMonitor(std::move(cfg), std::move(fingerprint), std::move(lower), std::move(upper));
    } catch (const Error& e) {
      throw ParseError("payload.envelope", e.what());
    }
  }

  const json& cubes = detail::member(payload, "cubes", "payload");
  if (!cubes.is_array()) throw ParseError("payload.cubes", "expected an array");
  PatternMonitor pm(std::move(cfg), std::move(fingerprint));
  const std::size_t width = pm.config().neuron_indices.size();
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    const std::string at = "payload.cubes[" + std::to_string(c) + "]";
    if (!cubes[c].is_array() || cubes[c].size() != width) {
      throw ParseError(at, "expected " + std::to_string(width) + " code ranges");
    }
    bdd::CodeCube cube;
    for (std::size_t j = 0; j < width; ++j) {
      const json& r = cubes[c][j];
      const std::string rat = at + "[" + std::to_string(j) + "]";
      if (!r.is_array() || r.size() != 2) throw ParseError(rat, "expected a [lo, hi] pair");
      const std::size_t lo = detail::index_value(r[0], rat + "[0]");
      const std::size_t hi = detail::index_value(r[1], rat + "[1]");
      if (hi > std::numeric_limits<std::uint32_t>::max()) throw ParseError(rat, "code out of range");
      cube.push_back({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)});
    }
    try {
      pm.insert_cube(cube);
    } catch (const ConfigError& e) {
      throw ParseError(at, e.what());
    }
  }
  return pm;
}

void save_monitor(const std::filesystem::path& path, const AnyMonitor& monitor) {
  detail::write_file(path, to_json(monitor));
}

AnyMonitor load_monitor(const std::filesystem::path& path) {
  return monitor_from_json(detail::read_file(path));
}

std::vector<ThresholdList> thresholds_from_json(std::string_view text) {
  return parse_thresholds(detail::parse_json(text), "thresholds");
}

std::string thresholds_to_json(const std::vector<ThresholdList>& thresholds) {
  return thresholds_json(thresholds).dump() + "\n";
}

}  // namespace napmon
