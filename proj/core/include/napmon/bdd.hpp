#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace napmon::bdd {

using NodeId = std::uint32_t;

inline constexpr NodeId kFalse = 0;
inline constexpr NodeId kTrue = 1;

/// Inclusive range of B-bit codes for one monitored neuron.
struct CodeRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  friend bool operator==(const CodeRange&, const CodeRange&) = default;
  friend auto operator<=>(const CodeRange&, const CodeRange&) = default;
};

/// One code range per monitored neuron. Stands for the product of the ranges,
/// i.e. every word whose j-th code lies in the j-th range.
using CodeCube = std::vector<CodeRange>;

/// Assignment to all variables, index 0 first.
using Word = std::vector<bool>;

using WordCount = boost::multiprecision::cpp_int;

struct Node {
  std::uint32_t var;  // var_count() for the two terminals
  NodeId low;
  NodeId high;
};

/// Reduced ordered BDD manager with a fixed variable order 0 < 1 < ... .
///
/// Nodes are hash-consed in a unique table, so two node ids denote the same
/// Boolean function iff they are equal. Nodes are never freed; a manager only
/// grows. Construction calls must be serialized by the caller; const members
/// are safe to call concurrently once construction is finished.
class Manager {
 public:
  explicit Manager(std::size_t var_count);

  std::size_t var_count() const noexcept { return var_count_; }
  /// Total number of nodes in the table, terminals included.
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  NodeId var(std::size_t index);
  NodeId nvar(std::size_t index);

  NodeId bdd_or(NodeId a, NodeId b);
  NodeId bdd_and(NodeId a, NodeId b);
  NodeId bdd_xor(NodeId a, NodeId b);
  NodeId bdd_not(NodeId a) { return bdd_xor(a, kTrue); }

  /// BDD of all words in the cube. Variable index of bit p (0 = most
  /// significant) of neuron j is j * bits_per_neuron + p. Size is linear in
  /// cube.size() * bits_per_neuron; the word set is never enumerated.
  NodeId cube(const CodeCube& cube, unsigned bits_per_neuron);

  /// root OR cube(c, bits_per_neuron).
  NodeId insert_cube(NodeId root, const CodeCube& c, unsigned bits_per_neuron);

  bool contains(NodeId root, const Word& word) const;

  /// Number of satisfying assignments over all var_count() variables.
  WordCount count_words(NodeId root) const;

  /// Number of nodes reachable from root, terminals included.
  std::size_t node_count(NodeId root) const;

  /// Walks the DAG under root and throws std::logic_error if a node is
  /// redundant (low == high), duplicated, or out of order.
  void check_invariants(NodeId root) const;

 private:
  enum class Op : std::uint8_t { And, Or, Xor };

  struct TripleHash {
    std::size_t operator()(const std::tuple<std::uint32_t, NodeId, NodeId>& t) const noexcept;
  };

  NodeId make(std::uint32_t var, NodeId low, NodeId high);
  NodeId apply(Op op, NodeId a, NodeId b);
  NodeId code_range(std::size_t base, unsigned bits, unsigned bit, std::uint32_t lo,
                    std::uint32_t hi, NodeId tail);

  std::size_t var_count_;
  std::vector<Node> nodes_;
  std::unordered_map<std::tuple<std::uint32_t, NodeId, NodeId>, NodeId, TripleHash> unique_;
  std::unordered_map<std::tuple<std::uint32_t, NodeId, NodeId>, NodeId, TripleHash> cache_;
};

}  // namespace napmon::bdd
