#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace napmon {

/// Elementwise activation functions. Every member is monotone nondecreasing,
/// which is what lets interval bounds pass through as [act(lo), act(hi)].
enum class Activation { Relu, Identity, Tanh };

double activate(Activation act, double x) noexcept;
std::string_view to_string(Activation act) noexcept;
Activation parse_activation(std::string_view name);

/// One dense layer: out = act(W * in + b), W stored row-major.
class Layer {
 public:
  Layer(std::size_t rows, std::size_t cols, std::vector<double> weights, std::vector<double> bias,
        Activation act);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double weight(std::size_t r, std::size_t c) const noexcept { return weights_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {weights_.data() + r * cols_, cols_};
  }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> bias() const noexcept { return bias_; }
  Activation activation() const noexcept { return act_; }

  /// Writes act(W * in + b) into `out`. The dot product starts from the bias
  /// and accumulates in ascending column order.
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  Activation act_;
};

/// Output of layer `layer` (0 denotes the raw input).
struct ActivationVector {
  std::vector<double> values;
  std::size_t layer = 0;
};

/// Immutable feed-forward network. Layers are numbered 1..depth(); dim(0) is
/// the input dimension.
class Network {
 public:
  Network(std::size_t input_dim, std::vector<Layer> layers);

  /// Parses the JSON network format:
  ///   {"input_dim": 2, "layers": [{"weights": [[1,-1]], "bias": [0], "activation": "relu"}]}
  static Network from_json(std::string_view text);
  static Network load(const std::filesystem::path& path);
  std::string to_json() const;

  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t dim(std::size_t k) const;
  const Layer& layer(std::size_t k) const;

  /// Output of layer k for input v. k == 0 returns v unchanged.
  ActivationVector forward(std::span<const double> v, std::size_t k) const;

  /// Applies layers from..to to z, which must have length dim(from - 1).
  ActivationVector forward_partial(std::span<const double> z, std::size_t from,
                                   std::size_t to) const;

  /// Content hash over the dimensions, activations and exact bit patterns of
  /// every parameter. Two networks compare equal iff the hashes match (modulo
  /// 64-bit collisions).
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::size_t input_dim_;
  std::vector<Layer> layers_;
  std::string fingerprint_;
};

}  // namespace napmon
