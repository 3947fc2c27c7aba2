#include "napmon/bdd.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "napmon/error.hpp"

namespace napmon::bdd {

std::size_t Manager::TripleHash::operator()(
    const std::tuple<std::uint32_t, NodeId, NodeId>& t) const noexcept {
  std::uint64_t h = std::get<0>(t);
  h = h * 0x9e3779b97f4a7c15ULL + std::get<1>(t);
  h = h * 0x9e3779b97f4a7c15ULL + std::get<2>(t);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

Manager::Manager(std::size_t var_count) : var_count_(var_count) {
  if (var_count >= std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("too many BDD variables");
  }
  const auto term = static_cast<std::uint32_t>(var_count);
  nodes_.push_back({term, kFalse, kFalse});
  nodes_.push_back({term, kTrue, kTrue});
}

NodeId Manager::make(std::uint32_t var, NodeId low, NodeId high) {
  if (low == high) return low;
  auto key = std::make_tuple(var, low, high);
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({var, low, high});
  unique_.emplace(key, id);
  return id;
}

NodeId Manager::var(std::size_t index) {
  if (index >= var_count_) throw ConfigError("BDD variable " + std::to_string(index) + " out of range");
  return make(static_cast<std::uint32_t>(index), kFalse, kTrue);
}

NodeId Manager::nvar(std::size_t index) {
  if (index >= var_count_) throw ConfigError("BDD variable " + std::to_string(index) + " out of range");
  return make(static_cast<std::uint32_t>(index), kTrue, kFalse);
}

NodeId Manager::apply(Op op, NodeId a, NodeId b) {
  switch (op) {
    case Op::And:
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue || a == b) return a;
      break;
    case Op::Or:
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse || a == b) return a;
      break;
    case Op::Xor:
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == b) return kFalse;
      if (a <= kTrue && b <= kTrue) return a ^ b;
      break;
  }
  if (a > b) std::swap(a, b);
  const auto key = std::make_tuple(static_cast<std::uint32_t>(op), a, b);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const Node na = nodes_[a];
  const Node nb = nodes_[b];
  const std::uint32_t top = std::min(na.var, nb.var);
  const NodeId a0 = na.var == top ? na.low : a;
  const NodeId a1 = na.var == top ? na.high : a;
  const NodeId b0 = nb.var == top ? nb.low : b;
  const NodeId b1 = nb.var == top ? nb.high : b;
  const NodeId low = apply(op, a0, b0);
  const NodeId high = apply(op, a1, b1);
  const NodeId result = make(top, low, high);
  cache_.emplace(key, result);
  return result;
}

NodeId Manager::bdd_or(NodeId a, NodeId b) { return apply(Op::Or, a, b); }
NodeId Manager::bdd_and(NodeId a, NodeId b) { return apply(Op::And, a, b); }
NodeId Manager::bdd_xor(NodeId a, NodeId b) { return apply(Op::Xor, a, b); }

// Codes [lo, hi] relative to the subtree spanned by bits bit..bits-1 of the
// neuron whose first variable is `base`; paths that stay in range continue at
// `tail`.
NodeId Manager::code_range(std::size_t base, unsigned bits, unsigned bit, std::uint32_t lo,
                           std::uint32_t hi, NodeId tail) {
  if (bit == bits) return tail;
  const unsigned remaining = bits - bit;
  const std::uint64_t full = (std::uint64_t{1} << remaining) - 1;
  if (lo == 0 && hi == full) return tail;
  const std::uint32_t half = std::uint32_t{1} << (remaining - 1);
  const NodeId low =
      lo < half ? code_range(base, bits, bit + 1, lo, std::min<std::uint32_t>(hi, half - 1), tail)
                : kFalse;
  const NodeId high =
      hi >= half ? code_range(base, bits, bit + 1, std::max(lo, half) - half, hi - half, tail)
                 : kFalse;
  return make(static_cast<std::uint32_t>(base + bit), low, high);
}

NodeId Manager::cube(const CodeCube& c, unsigned bits_per_neuron) {
  if (bits_per_neuron == 0 || bits_per_neuron > 31) {
    throw ConfigError("bits per neuron must be in 1..31");
  }
  if (c.size() * bits_per_neuron != var_count_) {
    throw ConfigError("cube covers " + std::to_string(c.size()) + " neurons at " +
                      std::to_string(bits_per_neuron) + " bits, manager has " +
                      std::to_string(var_count_) + " variables");
  }
  const std::uint32_t max_code = (std::uint32_t{1} << bits_per_neuron) - 1;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j].lo > c[j].hi || c[j].hi > max_code) {
      throw ConfigError("cube range " + std::to_string(j) + " is [" + std::to_string(c[j].lo) +
                        ", " + std::to_string(c[j].hi) + "], must satisfy lo <= hi <= " +
                        std::to_string(max_code));
    }
  }
  NodeId tail = kTrue;
  for (std::size_t j = c.size(); j-- > 0;) {
    tail = code_range(j * bits_per_neuron, bits_per_neuron, 0, c[j].lo, c[j].hi, tail);
  }
  return tail;
}

NodeId Manager::insert_cube(NodeId root, const CodeCube& c, unsigned bits_per_neuron) {
  return bdd_or(root, cube(c, bits_per_neuron));
}

bool Manager::contains(NodeId root, const Word& word) const {
  if (word.size() != var_count_) {
    throw DimensionError("word has " + std::to_string(word.size()) + " bits, expected " +
                         std::to_string(var_count_));
  }
  NodeId n = root;
  while (n > kTrue) {
    const Node& node = nodes_[n];
    n = word[node.var] ? node.high : node.low;
  }
  return n == kTrue;
}

WordCount Manager::count_words(NodeId root) const {
  std::unordered_map<NodeId, WordCount> memo;
  // Counts assignments to variables var(n)..var_count-1.
  auto count = [&](auto&& self, NodeId n) -> WordCount {
    if (n == kFalse) return 0;
    if (n == kTrue) return 1;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node& node = nodes_[n];
    const Node& lo = nodes_[node.low];
    const Node& hi = nodes_[node.high];
    WordCount result = (self(self, node.low) << (lo.var - node.var - 1)) +
                       (self(self, node.high) << (hi.var - node.var - 1));
    memo.emplace(n, result);
    return result;
  };
  return count(count, root) << nodes_.at(root).var;
}

std::size_t Manager::node_count(NodeId root) const {
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second || n <= kTrue) continue;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return seen.size();
}

void Manager::check_invariants(NodeId root) const {
  std::unordered_set<NodeId> seen;
  std::set<std::tuple<std::uint32_t, NodeId, NodeId>> triples;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n >= nodes_.size()) throw std::logic_error("dangling node id " + std::to_string(n));
    if (!seen.insert(n).second || n <= kTrue) continue;
    const Node& node = nodes_[n];
    if (node.low == node.high) {
      throw std::logic_error("node " + std::to_string(n) + " is redundant");
    }
    if (node.var >= var_count_ || nodes_[node.low].var <= node.var ||
        nodes_[node.high].var <= node.var) {
      throw std::logic_error("node " + std::to_string(n) + " violates the variable order");
    }
    if (!triples.emplace(node.var, node.low, node.high).second) {
      throw std::logic_error("node " + std::to_string(n) + " duplicates another node");
    }
    stack.push_back(node.low);
    stack.push_back(node.high);
  }
}

}  // namespace napmon::bdd
