#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cli/report.hpp"
#include "napmon/data.hpp"
#include "napmon/error.hpp"
#include "napmon/monitor.hpp"
#include "napmon/monitor_io.hpp"
#include "napmon/network.hpp"
#include "napmon/synthetic.hpp"

namespace napmon::cli {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset read_data(const std::string& path, const std::string& format) {
  if (format.empty()) return load_dataset(path);
  return load_dataset(path, parse_format(format));
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

std::size_t parse_index(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse '" + std::string(s) + "' as a neuron index");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto at = s.find(sep);
    parts.push_back(s.substr(0, at));
    if (at == std::string_view::npos) break;
    s.remove_prefix(at + 1);
  }
  return parts;
}

/// "0,2,5-7" -> {0, 2, 5, 6, 7}
std::vector<std::size_t> parse_neurons(std::string_view list) {
  std::vector<std::size_t> out;
  for (auto part : split(list, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_index(part));
      continue;
    }
    const std::size_t first = parse_index(part.substr(0, dash));
    const std::size_t last = parse_index(part.substr(dash + 1));
    if (first > last) throw ConfigError("empty neuron range '" + std::string(part) + "'");
    for (std::size_t i = first; i <= last; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ThresholdScheme parse_scheme(const std::string& spec) {
  if (spec == "zero") return ThresholdScheme::zero();
  if (spec.starts_with("quantile:")) {
    std::vector<double> p;
    for (auto part : split(std::string_view(spec).substr(9), ',')) p.push_back(parse_double(part));
    return ThresholdScheme::quantile(std::move(p));
  }
  if (spec.starts_with("explicit:")) {
    const fs::path path = spec.substr(9);
    return ThresholdScheme::explicit_values(thresholds_from_json(read_text(path)));
  }
  throw ConfigError("threshold scheme must be zero, quantile:P1,P2,... or explicit:PATH");
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string word_string(const std::vector<std::uint32_t>& codes, unsigned bits) {
  std::string s;
  for (std::size_t j = 0; j < codes.size(); ++j) {
    if (j) s.push_back(' ');
    for (unsigned b = bits; b-- > 0;) s.push_back(((codes[j] >> b) & 1U) ? '1' : '0');
  }
  return s;
}

struct BuildArgs {
  std::string network, data, format, type = "pattern", thresholds = "zero", neurons, out;
  std::size_t layer = 0, kp = 0;
  double delta = 0.0;
  unsigned bits = 1;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  const MonitorType type = parse_monitor_type(a.type);
  MonitorConfig config;
  config.layer_k = a.layer;
  config.layer_kp = a.kp;
  config.delta = a.delta;
  config.bits_per_neuron = a.bits;
  if (!a.neurons.empty()) config.neuron_indices = parse_neurons(a.neurons);
  validate_config(config, MonitorType::MinMax);
  const ThresholdScheme scheme = type == MonitorType::Pattern ? parse_scheme(a.thresholds) : ThresholdScheme{};

  const Network net = Network::load(a.network);
  const Dataset data = read_data(a.data, a.format);
  if (type == MonitorType::Pattern) config.thresholds = resolve_thresholds(net, data, config, scheme);

  const AnyMonitor monitor = build_monitor(type, net, data, config);
  save_monitor(a.out, monitor);
  out << "samples: " << data.size() << "\n" << format_summary(summarize(monitor), 0);
  return kOk;
}

struct EvalArgs {
  std::string monitor, network, format, verdicts;
  std::vector<std::string> data;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const AnyMonitor monitor = load_monitor(a.monitor);
  const Network net = Network::load(a.network);
  if (fingerprint_of(monitor) != net.fingerprint()) {
    throw FingerprintMismatch("monitor '" + a.monitor + "' was built for network " +
                              fingerprint_of(monitor) + ", but '" + a.network + "' is " +
                              net.fingerprint());
  }
  std::ofstream verdicts;
  if (!a.verdicts.empty()) {
    verdicts.open(a.verdicts, std::ios::trunc);
    if (!verdicts) throw IoError("cannot open '" + a.verdicts + "' for writing");
    verdicts << "dataset,index,warning,detail\n";
  }
  const unsigned bits = config_of(monitor).bits_per_neuron;

  Report report{summarize(monitor), {}};
  for (std::size_t d = 0; d < a.data.size(); ++d) {
    const Dataset data = read_data(a.data[d], a.format);
    if (!data.empty() && data.dim() != net.input_dim()) {
      throw DimensionError("'" + a.data[d] + "' has rows of length " + std::to_string(data.dim()) +
                           ", network expects " + std::to_string(net.input_dim()));
    }
    DatasetSummary summary{a.data[d], data.size(), 0};
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Verdict v = evaluate(monitor, net, data.row(i));
      if (v.warning) ++summary.warnings;
      if (verdicts.is_open()) {
        verdicts << d << ',' << i << ',' << (v.warning ? 1 : 0) << ',';
        if (type_of(monitor) == MonitorType::Pattern) {
          verdicts << word_string(v.observed_code, bits);
        } else {
          for (std::size_t n = 0; n < v.violating_neurons.size(); ++n) {
            verdicts << (n ? ";" : "") << v.violating_neurons[n];
          }
        }
        verdicts << '\n';
      }
    }
    report.evaluations.push_back(std::move(summary));
  }
  if (verdicts.is_open() && !verdicts) throw IoError("error while writing '" + a.verdicts + "'");
  out << format_report(report);
  return kOk;
}

struct GenArgs {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::string spec, prefix, format = "csv";
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const std::string text = read_text(a.spec);
  SyntheticSpec spec;
  try {
    spec = parse_synthetic_spec(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("bad synthetic spec: ") + e.what());
  }
  if (spec.dim != 0 && spec.dim != a.dim) {
    throw ConfigError("spec has dimension " + std::to_string(spec.dim) + " but --dim is " +
                      std::to_string(a.dim));
  }
  spec.seed = a.seed;
  spec.dim = a.dim;
  spec.validate();

  const DataFormat format = parse_format(a.format);
  const std::string ext = format == DataFormat::Csv ? ".csv" : ".f32";
  const SyntheticSplits splits = generate(spec);
  const std::pair<const char*, const Dataset*> outputs[] = {
      {"train", &splits.train}, {"held_out", &splits.held_out}, {"ood", &splits.ood}};
  for (const auto& [name, data] : outputs) {
    const std::string path = a.prefix + "_" + name + ext;
    save_dataset(path, *data, format);
    out << name << ": " << path << " (" << data->size() << " rows)\n";
  }
  return kOk;
}

struct ExtendArgs {
  std::string monitor, network, format, out;
  std::vector<std::string> data;
  std::optional<std::string> type;
  std::optional<std::size_t> layer, kp;
  std::optional<double> delta;
  std::optional<unsigned> bits;
};

int cmd_extend(const ExtendArgs& a, std::ostream& out) {
  AnyMonitor monitor = load_monitor(a.monitor);
  const MonitorConfig& cfg = config_of(monitor);
  auto mismatch = [](const std::string& what) { throw ConfigError("monitor " + what + " differs from the requested one"); };
  if (a.type && parse_monitor_type(*a.type) != type_of(monitor)) mismatch("type");
  if (a.layer && *a.layer != cfg.layer_k) mismatch("layer");
  if (a.kp && *a.kp != cfg.layer_kp) mismatch("perturbation layer");
  if (a.delta && *a.delta != cfg.delta) mismatch("delta");
  if (a.bits && *a.bits != cfg.bits_per_neuron) mismatch("bit width");

  const Network net = Network::load(a.network);
  if (fingerprint_of(monitor) != net.fingerprint()) {
    throw FingerprintMismatch("monitor '" + a.monitor + "' was built for network " +
                              fingerprint_of(monitor) + ", but '" + a.network + "' is " +
                              net.fingerprint());
  }
  std::size_t samples = 0;
  for (const auto& path : a.data) {
    const Dataset data = read_data(path, a.format);
    samples += data.size();
    monitor = extend(monitor, net, data);
  }
  save_monitor(a.out, monitor);
  out << "samples: " << samples << "\n" << format_summary(summarize(monitor), 0);
  return kOk;
}

int cmd_inspect(const std::string& path, std::ostream& out) {
  const AnyMonitor monitor = load_monitor(path);
  out << format_summary(summarize(monitor), 0);
  if (const auto* mm = std::get_if<MinMaxMonitor>(&monitor)) {
    out << "envelope:\n";
    const auto& idx = mm->config().neuron_indices;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out << "  - [" << idx[j] << ", " << shortest(mm->lower()[j]) << ", " << shortest(mm->upper()[j]) << "]\n";
    }
  } else {
    const auto& cfg = std::get<PatternMonitor>(monitor).config();
    out << "thresholds: " << thresholds_to_json(cfg.thresholds);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build and evaluate robust neuron-activation monitors", "napmon"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* sub_build = app.add_subcommand("build", "Build a monitor from training data");
  sub_build->add_option("--network", build.network, "Network JSON file")->required();
  sub_build->add_option("--data", build.data, "Training data (CSV or raw_f32)")->required();
  sub_build->add_option("--format", build.format, "Data format: csv or raw_f32 (default: detect)");
  sub_build->add_option("--layer", build.layer, "Monitored layer k (1-based)")->required();
  sub_build->add_option("--kp", build.kp, "Perturbation layer k_p (0 = input)");
  sub_build->add_option("--delta", build.delta, "Perturbation radius")->check(CLI::NonNegativeNumber);
  sub_build->add_option("--type", build.type, "minmax or pattern")->check(CLI::IsMember({"minmax", "pattern"}));
  sub_build->add_option("--bits", build.bits, "Bits per neuron (pattern)")->check(CLI::Range(1U, kMaxBitsPerNeuron));
  sub_build->add_option("--thresholds", build.thresholds, "zero | quantile:P1,P2,... | explicit:PATH");
  sub_build->add_option("--neurons", build.neurons, "Monitored neurons, e.g. 0,2,4-7 (default: all)");
  sub_build->add_option("--out", build.out, "Output monitor file")->required();

  EvalArgs eval;
  auto* sub_eval = app.add_subcommand("eval", "Evaluate inputs against a monitor");
  sub_eval->add_option("--monitor", eval.monitor, "Monitor file")->required();
  sub_eval->add_option("--network", eval.network, "Network JSON file")->required();
  sub_eval->add_option("--data", eval.data, "Input data (repeatable)")->required();
  sub_eval->add_option("--format", eval.format, "Data format: csv or raw_f32 (default: detect)");
  sub_eval->add_option("--verdicts", eval.verdicts, "Write per-input verdicts as CSV");

  GenArgs gen;
  auto* sub_gen = app.add_subcommand("gen", "Generate synthetic train/held-out/OOD data");
  sub_gen->add_option("--seed", gen.seed, "PRNG seed")->required();
  sub_gen->add_option("--dim", gen.dim, "Input dimension")->required()->check(CLI::PositiveNumber);
  sub_gen->add_option("--spec", gen.spec, "Cluster spec JSON")->required();
  sub_gen->add_option("--out-prefix", gen.prefix, "Output path prefix")->required();
  sub_gen->add_option("--format", gen.format, "csv or raw_f32")->check(CLI::IsMember({"csv", "raw_f32"}));

  ExtendArgs ext;
  auto* sub_ext = app.add_subcommand("extend", "Continue building a monitor on more data");
  sub_ext->add_option("--monitor", ext.monitor, "Monitor file")->required();
  sub_ext->add_option("--network", ext.network, "Network JSON file")->required();
  sub_ext->add_option("--data", ext.data, "Additional data (repeatable)")->required();
  sub_ext->add_option("--format", ext.format, "Data format: csv or raw_f32 (default: detect)");
  sub_ext->add_option("--out", ext.out, "Output monitor file")->required();
  sub_ext->add_option("--type", ext.type, "Expected monitor type");
  sub_ext->add_option("--layer", ext.layer, "Expected monitored layer");
  sub_ext->add_option("--kp", ext.kp, "Expected perturbation layer");
  sub_ext->add_option("--delta", ext.delta, "Expected perturbation radius");
  sub_ext->add_option("--bits", ext.bits, "Expected bits per neuron");

  std::string inspect_path;
  auto* sub_inspect = app.add_subcommand("inspect", "Print a monitor's configuration and contents");
  sub_inspect->add_option("--monitor", inspect_path, "Monitor file")->required();

  std::vector<std::string> argv_storage{"napmon"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (sub_build->parsed()) return cmd_build(build, out);
    if (sub_eval->parsed()) return cmd_eval(eval, out);
    if (sub_gen->parsed()) return cmd_gen(gen, out);
    if (sub_ext->parsed()) return cmd_extend(ext, out);
    if (sub_inspect->parsed()) return cmd_inspect(inspect_path, out);
  } catch (const FingerprintMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kFingerprint;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsageError;
}

}  // namespace napmon::cli
