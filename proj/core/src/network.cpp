#include "napmon/network.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <string>

#include "json_util.hpp"
#include "napmon/error.hpp"

namespace napmon {

double activate(Activation act, double x) noexcept {
  switch (act) {
    case Activation::Relu:
      return x > 0.0 ? x : 0.0;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Identity:
      break;
  }
  return x;
}

std::string_view to_string(Activation act) noexcept {
  switch (act) {
    case Activation::Relu:
      return "relu";
    case Activation::Tanh:
      return "tanh";
    case Activation::Identity:
      break;
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "identity" || name == "linear") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Layer::Layer(std::size_t rows, std::size_t cols, std::vector<double> weights,
             std::vector<double> bias, Activation act)
    : rows_(rows), cols_(cols), weights_(std::move(weights)), bias_(std::move(bias)), act_(act) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("layer must have at least one row and column");
  if (weights_.size() != rows_ * cols_) {
    throw DimensionError("weight buffer holds " + std::to_string(weights_.size()) +
                         " values, expected " + std::to_string(rows_ * cols_));
  }
  if (bias_.size() != rows_) {
    throw DimensionError("bias length " + std::to_string(bias_.size()) + " does not match " +
                         std::to_string(rows_) + " rows");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw ConfigError("non-finite weight");
  }
  for (double b : bias_) {
    if (!std::isfinite(b)) throw ConfigError("non-finite bias");
  }
}

void Layer::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != cols_ || out.size() != rows_) {
    throw DimensionError("layer expects input of length " + std::to_string(cols_) + ", got " +
                         std::to_string(in.size()));
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* w = weights_.data() + r * cols_;
    double acc = bias_[r];
    for (std::size_t c = 0; c < cols_; ++c) acc += w[c] * in[c];
    out[r] = activate(act_, acc);
  }
}

namespace {

std::string compute_fingerprint(std::size_t input_dim, const std::vector<Layer>& layers) {
  std::string canon;
  auto put_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) canon.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto put_f64 = [&](double v) { put_u64(std::bit_cast<std::uint64_t>(v)); };
  put_u64(input_dim);
  put_u64(layers.size());
  for (const auto& layer : layers) {
    put_u64(layer.rows());
    put_u64(layer.cols());
    put_u64(static_cast<std::uint64_t>(layer.activation()));
    for (double w : layer.weights()) put_f64(w);
    for (double b : layer.bias()) put_f64(b);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(detail::fnv1a64(canon)));
  return buf;
}

}  // namespace

Network::Network(std::size_t input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ == 0) throw DimensionError("input_dim must be positive");
  if (layers_.empty()) throw DimensionError("network has no layers");
  std::size_t prev = input_dim_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].cols() != prev) {
      throw DimensionError("layer " + std::to_string(i + 1) + ": weight matrix has " +
                           std::to_string(layers_[i].cols()) + " columns, expected " +
                           std::to_string(prev));
    }
    prev = layers_[i].rows();
  }
  fingerprint_ = compute_fingerprint(input_dim_, layers_);
}

Network Network::from_json(std::string_view text) {
  using detail::json;
  json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("<root>", "expected an object");

  const json& jdim = detail::member(doc, "input_dim", "");
  if (!jdim.is_number_integer() || jdim.get<long long>() <= 0) {
    throw ParseError("input_dim", "expected a positive integer");
  }
  const auto input_dim = jdim.get<std::size_t>();

  const json& jlayers = detail::member(doc, "layers", "");
  if (!jlayers.is_array()) throw ParseError("layers", "expected an array");
  if (jlayers.empty()) throw ParseError("layers", "layer list is empty");

  std::vector<Layer> layers;
  layers.reserve(jlayers.size());
  std::size_t prev = input_dim;
  for (std::size_t i = 0; i < jlayers.size(); ++i) {
    const std::string at = "layers[" + std::to_string(i) + "]";
    const json& jl = jlayers[i];
    const json& jw = detail::member(jl, "weights", at);
    if (!jw.is_array() || jw.empty()) throw ParseError(at + ".weights", "expected a non-empty array");

    const std::size_t rows = jw.size();
    std::size_t cols = 0;
    std::vector<double> weights;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rat = at + ".weights[" + std::to_string(r) + "]";
      const json& jrow = jw[r];
      if (!jrow.is_array()) throw ParseError(rat, "expected an array");
      if (r == 0) {
        cols = jrow.size();
        weights.reserve(rows * cols);
      } else if (jrow.size() != cols) {
        throw ParseError(rat, "row has " + std::to_string(jrow.size()) + " entries, expected " +
                                  std::to_string(cols));
      }
      for (std::size_t c = 0; c < jrow.size(); ++c) {
        weights.push_back(detail::finite_number(jrow[c], rat + "[" + std::to_string(c) + "]"));
      }
    }
    if (cols != prev) {
      throw DimensionError("layer " + std::to_string(i + 1) + ": weight matrix has " +
                           std::to_string(cols) + " columns, expected " + std::to_string(prev));
    }

    const json& jb = detail::member(jl, "bias", at);
    if (!jb.is_array()) throw ParseError(at + ".bias", "expected an array");
    if (jb.size() != rows) {
      throw DimensionError("layer " + std::to_string(i + 1) + ": bias has " +
                           std::to_string(jb.size()) + " entries, expected " +
                           std::to_string(rows));
    }
    std::vector<double> bias;
    bias.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      bias.push_back(detail::finite_number(jb[r], at + ".bias[" + std::to_string(r) + "]"));
    }

    const json& ja = detail::member(jl, "activation", at);
    if (!ja.is_string()) throw ParseError(at + ".activation", "expected a string");
    Activation act;
    try {
      act = parse_activation(ja.get<std::string>());
    } catch (const ConfigError& e) {
      throw ParseError(at + ".activation", e.what());
    }
    layers.emplace_back(rows, cols, std::move(weights), std::move(bias), act);
    prev = rows;
  }
  return Network(input_dim, std::move(layers));
}

Network Network::load(const std::filesystem::path& path) {
  return from_json(detail::read_file(path));
}

std::string Network::to_json() const {
  using detail::json;
  json doc;
  doc["input_dim"] = input_dim_;
  json jlayers = json::array();
  for (const auto& layer : layers_) {
    json jw = json::array();
    for (std::size_t r = 0; r < layer.rows(); ++r) {
      auto row = layer.row(r);
      jw.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    auto bias = layer.bias();
    jlayers.push_back({{"weights", std::move(jw)},
                       {"bias", std::vector<double>(bias.begin(), bias.end())},
                       {"activation", std::string(to_string(layer.activation()))}});
  }
  doc["layers"] = std::move(jlayers);
  return doc.dump(2) + "\n";
}

std::size_t Network::dim(std::size_t k) const {
  if (k == 0) return input_dim_;
  if (k > layers_.size()) {
    throw ConfigError("layer " + std::to_string(k) + " out of range 0.." +
                      std::to_string(layers_.size()));
  }
  return layers_[k - 1].rows();
}

const Layer& Network::layer(std::size_t k) const {
  if (k == 0 || k > layers_.size()) {
    throw ConfigError("layer " + std::to_string(k) + " out of range 1.." +
                      std::to_string(layers_.size()));
  }
  return layers_[k - 1];
}

ActivationVector Network::forward(std::span<const double> v, std::size_t k) const {
  if (v.size() != input_dim_) {
    throw DimensionError("input has length " + std::to_string(v.size()) + ", network expects " +
                         std::to_string(input_dim_));
  }
  if (k == 0) return {std::vector<double>(v.begin(), v.end()), 0};
  return forward_partial(v, 1, k);
}

ActivationVector Network::forward_partial(std::span<const double> z, std::size_t from,
                                          std::size_t to) const {
  if (from == 0 || from > to || to > layers_.size()) {
    throw ConfigError("invalid layer range " + std::to_string(from) + ".." + std::to_string(to) +
                      " for a network of depth " + std::to_string(layers_.size()));
  }
  if (z.size() != dim(from - 1)) {
    throw DimensionError("partial forward from layer " + std::to_string(from) +
                         " expects length " + std::to_string(dim(from - 1)) + ", got " +
                         std::to_string(z.size()));
  }
  std::vector<double> cur(z.begin(), z.end());
  std::vector<double> next;
  for (std::size_t k = from; k <= to; ++k) {
    const Layer& l = layers_[k - 1];
    next.assign(l.rows(), 0.0);
    l.apply(cur, next);
    cur.swap(next);
  }
  return {std::move(cur), to};
}

}  // namespace napmon
