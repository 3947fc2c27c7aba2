#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "napmon/bounds.hpp"
#include "napmon/monitor.hpp"

namespace {

using napmon::Activation;
using napmon::Dataset;
using napmon::Layer;
using napmon::Network;

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Network make_network(std::size_t width, std::size_t depth) {
  std::mt19937_64 rng(7);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l < depth; ++l) {
    layers.emplace_back(width, width, random_vector(rng, width * width, 1.0 / std::sqrt(double(width))),
                        random_vector(rng, width, 0.1), Activation::Relu);
  }
  return Network(width, std::move(layers));
}

Dataset make_data(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(11);
  Dataset d(dim);
  for (std::size_t i = 0; i < rows; ++i) d.add_row(random_vector(rng, dim, 1.0));
  return d;
}

void BM_Forward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Network net = make_network(width, 4);
  const Dataset data = make_data(1, width);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(data.row(0), 4));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256);

void BM_PerturbationEstimate(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Network net = make_network(width, 4);
  const Dataset data = make_data(1, width);
  for (auto _ : state) benchmark::DoNotOptimize(napmon::perturbation_estimate(net, data.row(0), 4, 1, 0.05));
}
BENCHMARK(BM_PerturbationEstimate)->Arg(16)->Arg(64)->Arg(256);

void BM_InsertCube(benchmark::State& state) {
  const auto neurons = static_cast<std::size_t>(state.range(0));
  const unsigned bits = 2;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> code(0, 3);
  std::vector<napmon::bdd::CodeCube> cubes(256);
  for (auto& c : cubes) {
    for (std::size_t j = 0; j < neurons; ++j) {
      auto a = code(rng), b = code(rng);
      if (a > b) std::swap(a, b);
      c.push_back({a, b});
    }
  }
  for (auto _ : state) {
    napmon::bdd::Manager m(neurons * bits);
    napmon::bdd::NodeId root = napmon::bdd::kFalse;
    for (const auto& c : cubes) root = m.insert_cube(root, c, bits);
    benchmark::DoNotOptimize(root);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cubes.size()));
}
BENCHMARK(BM_InsertCube)->Arg(8)->Arg(32)->Arg(64);

napmon::MonitorConfig pattern_config(const Network& net, const Dataset& data, double delta) {
  napmon::MonitorConfig c;
  c.layer_k = 3;
  c.layer_kp = 2;
  c.delta = delta;
  c.bits_per_neuron = 2;
  c.thresholds = napmon::resolve_thresholds(net, data, c, napmon::ThresholdScheme::quantile({0.25, 0.5, 0.75}));
  return c;
}

void BM_BuildPattern(benchmark::State& state) {
  const Network net = make_network(32, 3);
  const Dataset data = make_data(static_cast<std::size_t>(state.range(0)), 32);
  const auto config = pattern_config(net, data, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(napmon::build_pattern(net, data, config).root());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildPattern)->Arg(100)->Arg(1000);

void BM_EvaluatePattern(benchmark::State& state) {
  const Network net = make_network(32, 3);
  const Dataset data = make_data(1000, 32);
  const auto monitor = napmon::build_pattern(net, data, pattern_config(net, data, 0.05));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(napmon::evaluate(monitor, net, data.row(i)).warning);
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_EvaluatePattern);

void BM_EvaluateMinMax(benchmark::State& state) {
  const Network net = make_network(32, 3);
  const Dataset data = make_data(1000, 32);
  napmon::MonitorConfig c;
  c.layer_k = 3;
  c.layer_kp = 2;
  c.delta = 0.05;
  const auto monitor = napmon::build_minmax(net, data, c);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(napmon::evaluate(monitor, net, data.row(i)).warning);
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_EvaluateMinMax);

}  // namespace

BENCHMARK_MAIN();
