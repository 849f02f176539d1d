#include "core/circuit.hpp"

namespace fairflow::engine {

namespace {

using dsl::BinOp;
using dsl::Expr;
using dsl::Stmt;
using dsl::UnOp;

using BitVec = std::vector<NodeId>;

} // namespace

Circuit::Circuit() {
  nodes_.push_back(Node{Kind::ConstFalse, -1, -1});
  nodes_.push_back(Node{Kind::ConstTrue, -1, -1});
}

NodeId Circuit::add_input_bit() {
  nodes_.push_back(Node{Kind::Input, -1, -1});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Circuit::intern(Kind kind, NodeId a, NodeId b) {
  // 3 disjoint fields: kind | a+1 | b+1 (ids stay far below 2^29)
  if (a >= (1 << 29) || b >= (1 << 29)) fail(ErrorCode::Internal, "circuit too large to hash");
  std::uint64_t key = (static_cast<std::uint64_t>(kind) << 58) |
                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a + 1)) << 29) |
                      static_cast<std::uint64_t>(static_cast<std::uint32_t>(b + 1));
  auto it = dedupe_.find(key);
  if (it != dedupe_.end()) return it->second;
  nodes_.push_back(Node{kind, a, b});
  NodeId id = static_cast<NodeId>(nodes_.size() - 1);
  dedupe_.emplace(key, id);
  return id;
}

NodeId Circuit::mk_not(NodeId a) {
  if (a == const_false()) return const_true();
  if (a == const_true()) return const_false();
  if (nodes_[static_cast<size_t>(a)].kind == Kind::Not) return nodes_[static_cast<size_t>(a)].a;
  return intern(Kind::Not, a, -1);
}

NodeId Circuit::mk_and(NodeId a, NodeId b) {
  if (a == const_false() || b == const_false()) return const_false();
  if (a == const_true()) return b;
  if (b == const_true()) return a;
  if (a == b) return a;
  if (a > b) std::swap(a, b);
  return intern(Kind::And, a, b);
}

NodeId Circuit::mk_or(NodeId a, NodeId b) {
  if (a == const_true() || b == const_true()) return const_true();
  if (a == const_false()) return b;
  if (b == const_false()) return a;
  if (a == b) return a;
  if (a > b) std::swap(a, b);
  return intern(Kind::Or, a, b);
}

NodeId Circuit::mk_xor(NodeId a, NodeId b) {
  if (a == const_false()) return b;
  if (b == const_false()) return a;
  if (a == const_true()) return mk_not(b);
  if (b == const_true()) return mk_not(a);
  if (a == b) return const_false();
  if (a > b) std::swap(a, b);
  return intern(Kind::Xor, a, b);
}

Circuit::SimResult Circuit::simulate(const std::int64_t* args) const {
  std::vector<bool> value(nodes_.size(), false);
  value[1] = true;
  // inputs
  for (size_t p = 0; p < inputs_.size(); ++p) {
    std::uint32_t word = static_cast<std::uint32_t>(static_cast<std::int32_t>(args[p]));
    for (int bit = 0; bit < kWordBits; ++bit) {
      value[static_cast<size_t>(inputs_[p].bits[static_cast<size_t>(bit)])] =
          (word >> bit) & 1u;
    }
  }
  for (size_t i = 2; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.kind) {
      case Kind::Input: break; // already set
      case Kind::Not: value[i] = !value[static_cast<size_t>(n.a)]; break;
      case Kind::And:
        value[i] = value[static_cast<size_t>(n.a)] && value[static_cast<size_t>(n.b)];
        break;
      case Kind::Or:
        value[i] = value[static_cast<size_t>(n.a)] || value[static_cast<size_t>(n.b)];
        break;
      case Kind::Xor:
        value[i] = value[static_cast<size_t>(n.a)] != value[static_cast<size_t>(n.b)];
        break;
      default: break;
    }
  }
  SimResult result;
  std::uint32_t word = 0;
  for (int bit = 0; bit < kWordBits; ++bit) {
    if (value[static_cast<size_t>(output_bits_[static_cast<size_t>(bit)])]) {
      word |= (1u << bit);
    }
  }
  result.output = static_cast<std::int64_t>(static_cast<std::int32_t>(word));
  result.in_domain = value[static_cast<size_t>(domain_constraint_)];
  return result;
}

void Circuit::corrupt_output_for_test() {
  output_bits_[0] = mk_not(output_bits_[0]);
}

namespace {

class Compiler {
 public:
  explicit Compiler(const dsl::ValidatedProgram& p) : p_(p) {}

  Circuit run() {
    // parameter inputs + domain side conditions
    NodeId constraint = circuit_.const_true();
    for (const auto& param : p_.program().params) {
      Circuit::InputVec input;
      input.name = param.name;
      for (int bit = 0; bit < kWordBits; ++bit) input.bits.push_back(circuit_.add_input_bit());
      constraint = circuit_.mk_and(constraint, domain_condition(input.bits, param.domain));
      circuit_.push_input(std::move(input));
    }
    circuit_.set_domain_constraint(constraint);

    State state;
    state.slots.resize(static_cast<size_t>(p_.slot_count()));
    for (size_t i = 0; i < p_.program().params.size(); ++i) {
      state.slots[i] = circuit_.inputs()[i].bits;
    }
    state.result = bv_const(0);
    state.done = circuit_.const_false();
    compile_body(p_.program().body, state);
    circuit_.set_output_bits(state.result);
    return std::move(circuit_);
  }

 private:
  struct State {
    std::vector<BitVec> slots;
    BitVec result;
    NodeId done = 0;
  };

  BitVec bv_const(std::int64_t v) {
    BitVec bits(kWordBits);
    std::uint32_t word = static_cast<std::uint32_t>(static_cast<std::int32_t>(v));
    for (int i = 0; i < kWordBits; ++i) {
      bits[static_cast<size_t>(i)] =
          ((word >> i) & 1u) ? circuit_.const_true() : circuit_.const_false();
    }
    return bits;
  }

  BitVec bv_from_bool(NodeId b) {
    BitVec bits(kWordBits, circuit_.const_false());
    bits[0] = b;
    return bits;
  }

  BitVec bv_add(const BitVec& a, const BitVec& b, NodeId carry_in) {
    BitVec sum(kWordBits);
    NodeId carry = carry_in;
    for (int i = 0; i < kWordBits; ++i) {
      NodeId ai = a[static_cast<size_t>(i)], bi = b[static_cast<size_t>(i)];
      NodeId axb = circuit_.mk_xor(ai, bi);
      sum[static_cast<size_t>(i)] = circuit_.mk_xor(axb, carry);
      carry = circuit_.mk_or(circuit_.mk_and(ai, bi), circuit_.mk_and(axb, carry));
    }
    return sum;
  }

  BitVec bv_not(const BitVec& a) {
    BitVec out(kWordBits);
    for (int i = 0; i < kWordBits; ++i) {
      out[static_cast<size_t>(i)] = circuit_.mk_not(a[static_cast<size_t>(i)]);
    }
    return out;
  }

  BitVec bv_neg(const BitVec& a) {
    return bv_add(bv_not(a), bv_const(0), circuit_.const_true());
  }

  BitVec bv_sub(const BitVec& a, const BitVec& b) {
    return bv_add(a, bv_not(b), circuit_.const_true());
  }

  BitVec bv_shl(const BitVec& a, int amount) {
    BitVec out(kWordBits, circuit_.const_false());
    for (int i = amount; i < kWordBits; ++i) {
      out[static_cast<size_t>(i)] = a[static_cast<size_t>(i - amount)];
    }
    return out;
  }

  BitVec bv_mul(const BitVec& a, const BitVec& b) {
    // shift-add; constant bits in b fold every dead partial product away
    BitVec acc = bv_const(0);
    for (int i = 0; i < kWordBits; ++i) {
      NodeId bi = b[static_cast<size_t>(i)];
      if (bi == circuit_.const_false()) continue;
      BitVec shifted = bv_shl(a, i);
      BitVec addend(kWordBits);
      for (int j = 0; j < kWordBits; ++j) {
        addend[static_cast<size_t>(j)] = circuit_.mk_and(shifted[static_cast<size_t>(j)], bi);
      }
      acc = bv_add(acc, addend, circuit_.const_false());
    }
    return acc;
  }

  BitVec bv_mux(NodeId sel, const BitVec& t, const BitVec& e) {
    BitVec out(kWordBits);
    NodeId nsel = circuit_.mk_not(sel);
    for (int i = 0; i < kWordBits; ++i) {
      out[static_cast<size_t>(i)] =
          circuit_.mk_or(circuit_.mk_and(sel, t[static_cast<size_t>(i)]),
                         circuit_.mk_and(nsel, e[static_cast<size_t>(i)]));
    }
    return out;
  }

  NodeId mux_bit(NodeId sel, NodeId t, NodeId e) {
    return circuit_.mk_or(circuit_.mk_and(sel, t),
                          circuit_.mk_and(circuit_.mk_not(sel), e));
  }

  NodeId bv_eq(const BitVec& a, const BitVec& b) {
    NodeId eq = circuit_.const_true();
    for (int i = 0; i < kWordBits; ++i) {
      eq = circuit_.mk_and(
          eq, circuit_.mk_not(circuit_.mk_xor(a[static_cast<size_t>(i)],
                                              b[static_cast<size_t>(i)])));
    }
    return eq;
  }

  // unsigned a < b, scanning from the most significant bit
  NodeId bv_ult(const BitVec& a, const BitVec& b) {
    NodeId lt = circuit_.const_false();
    NodeId eq = circuit_.const_true();
    for (int i = kWordBits - 1; i >= 0; --i) {
      NodeId ai = a[static_cast<size_t>(i)], bi = b[static_cast<size_t>(i)];
      lt = circuit_.mk_or(lt, circuit_.mk_and(eq, circuit_.mk_and(circuit_.mk_not(ai), bi)));
      eq = circuit_.mk_and(eq, circuit_.mk_not(circuit_.mk_xor(ai, bi)));
    }
    return lt;
  }

  // signed a < b: flip sign bits, compare unsigned
  NodeId bv_slt(const BitVec& a, const BitVec& b) {
    BitVec af = a, bf = b;
    af[kWordBits - 1] = circuit_.mk_not(a[kWordBits - 1]);
    bf[kWordBits - 1] = circuit_.mk_not(b[kWordBits - 1]);
    return bv_ult(af, bf);
  }

  NodeId domain_condition(const BitVec& bits, const Domain& domain) {
    if (domain.is_interval()) {
      NodeId ge_lo = circuit_.mk_not(bv_slt(bits, bv_const(domain.lo())));
      NodeId le_hi = circuit_.mk_not(bv_slt(bv_const(domain.hi()), bits));
      return circuit_.mk_and(ge_lo, le_hi);
    }
    NodeId any = circuit_.const_false();
    for (std::int64_t v : domain.values()) {
      any = circuit_.mk_or(any, bv_eq(bits, bv_const(v)));
    }
    return any;
  }

  BitVec compile_expr(const Expr& expr, const State& state) {
    return std::visit(
        [&](const auto& n) -> BitVec {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::IntLit>) {
            return bv_const(n.value);
          } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
            return state.slots[static_cast<size_t>(n.slot)];
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            BitVec v = compile_expr(*n.operand, state);
            if (n.op == UnOp::Neg) return bv_neg(v);
            return bv_from_bool(circuit_.mk_not(v[0])); // operand proven in {0,1}
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            return compile_binary(n, state);
          } else {
            NodeId sel = compile_expr(*n.cond, state)[0];
            BitVec t = compile_expr(*n.then_value, state);
            BitVec e = compile_expr(*n.else_value, state);
            return bv_mux(sel, t, e);
          }
        },
        expr.node);
  }

  BitVec compile_binary(const Expr::Binary& n, const State& state) {
    BitVec a = compile_expr(*n.lhs, state);
    BitVec b = compile_expr(*n.rhs, state);
    switch (n.op) {
      case BinOp::Add: return bv_add(a, b, circuit_.const_false());
      case BinOp::Sub: return bv_sub(a, b);
      case BinOp::Mul: return bv_mul(a, b);
      case BinOp::Eq: return bv_from_bool(bv_eq(a, b));
      case BinOp::Ne: return bv_from_bool(circuit_.mk_not(bv_eq(a, b)));
      case BinOp::Lt: return bv_from_bool(bv_slt(a, b));
      case BinOp::Le: return bv_from_bool(circuit_.mk_not(bv_slt(b, a)));
      case BinOp::Gt: return bv_from_bool(bv_slt(b, a));
      case BinOp::Ge: return bv_from_bool(circuit_.mk_not(bv_slt(a, b)));
      case BinOp::And: return bv_from_bool(circuit_.mk_and(a[0], b[0]));
      case BinOp::Or: return bv_from_bool(circuit_.mk_or(a[0], b[0]));
    }
    fail(ErrorCode::Internal, "unhandled operator");
  }

  void compile_body(const std::vector<dsl::StmtPtr>& body, State& state) {
    for (const auto& stmt : body) {
      bool always_returns = false;
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
              state.slots[static_cast<size_t>(n.slot)] = compile_expr(*n.value, state);
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
              NodeId sel = compile_expr(*n.cond, state)[0];
              State then_state = state;
              State else_state = state;
              compile_body(n.then_body, then_state);
              compile_body(n.else_body, else_state);
              for (size_t s = 0; s < state.slots.size(); ++s) {
                if (then_state.slots[s] != else_state.slots[s]) {
                  state.slots[s] = bv_mux(sel, then_state.slots[s], else_state.slots[s]);
                } else {
                  state.slots[s] = then_state.slots[s];
                }
              }
              state.result = bv_mux(sel, then_state.result, else_state.result);
              state.done = mux_bit(sel, then_state.done, else_state.done);
            } else {
              BitVec v = compile_expr(*n.value, state);
              state.result = bv_mux(state.done, state.result, v);
              state.done = circuit_.const_true();
              always_returns = true;
            }
          },
          stmt->node);
      if (always_returns) break; // trailing statements are unreachable
    }
  }

  const dsl::ValidatedProgram& p_;
  Circuit circuit_;
};

} // namespace

Circuit bitblast(const dsl::ValidatedProgram& p) {
  Compiler compiler(p);
  return compiler.run();
}

} // namespace fairflow::engine
