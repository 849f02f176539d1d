#pragma once

#include <cstdint>
#include <unordered_map>

#include "core/space.hpp"

namespace fairflow::engine {

using NodeId = std::int32_t;

inline constexpr int kWordBits = 32;

// An acyclic gate list compiled from a decision program. Inputs are 32-bit
// two's-complement vectors, one per program parameter; `output_bits` carry the
// decision and `domain_constraint` conjoins the parameter-domain side
// conditions (lo <= x <= hi resp. set membership). Nodes are stored in
// topological order; node 0 is constant false, node 1 constant true.
class Circuit {
 public:
  enum class Kind : std::uint8_t { ConstFalse, ConstTrue, Input, Not, And, Or, Xor };

  struct Node {
    Kind kind;
    NodeId a = -1;
    NodeId b = -1;
  };

  struct InputVec {
    std::string name;
    std::vector<NodeId> bits; // LSB first
  };

  Circuit();

  NodeId const_false() const { return 0; }
  NodeId const_true() const { return 1; }
  NodeId add_input_bit();
  NodeId mk_not(NodeId a);
  NodeId mk_and(NodeId a, NodeId b);
  NodeId mk_or(NodeId a, NodeId b);
  NodeId mk_xor(NodeId a, NodeId b);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<InputVec>& inputs() const { return inputs_; }
  const std::vector<NodeId>& output_bits() const { return output_bits_; }
  NodeId domain_constraint() const { return domain_constraint_; }

  // Gate-level evaluation; args in parameter order. Returns the decision and
  // whether the domain side conditions hold.
  struct SimResult {
    std::int64_t output = 0;
    bool in_domain = false;
  };
  SimResult simulate(const std::int64_t* args) const;

  // test support: negates the low decision bit to fault-inject a mutant
  void corrupt_output_for_test();

  // construction-time wiring (used by the bit-blaster)
  void push_input(InputVec input) { inputs_.push_back(std::move(input)); }
  void set_domain_constraint(NodeId n) { domain_constraint_ = n; }
  void set_output_bits(std::vector<NodeId> bits) { output_bits_ = std::move(bits); }

 private:
  NodeId intern(Kind kind, NodeId a, NodeId b);

  std::vector<Node> nodes_;
  std::vector<InputVec> inputs_;
  std::vector<NodeId> output_bits_;
  NodeId domain_constraint_ = 1;
  std::unordered_map<std::uint64_t, NodeId> dedupe_;
};

// Compiles a typechecked program to a circuit whose semantics equal
// evaluate() bit-for-bit on every in-domain assignment (width safety is the
// typechecker's overflow guarantee).
Circuit bitblast(const dsl::ValidatedProgram& p);

} // namespace fairflow::engine
