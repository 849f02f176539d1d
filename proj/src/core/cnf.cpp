#include "core/cnf.hpp"

#include <ostream>

namespace fairflow::engine {

std::int64_t CnfFormula::decode(const VarGroup& group, const std::vector<bool>& model) const {
  std::uint32_t word = 0;
  for (size_t bit = 0; bit < group.vars.size(); ++bit) {
    if (model[static_cast<size_t>(group.vars[bit])]) word |= (1u << bit);
  }
  return static_cast<std::int64_t>(static_cast<std::int32_t>(word));
}

std::int64_t CnfFormula::decode_output(const std::vector<bool>& model) const {
  std::uint32_t word = 0;
  for (size_t bit = 0; bit < d_vars.size(); ++bit) {
    if (model[static_cast<size_t>(d_vars[bit])]) word |= (1u << bit);
  }
  return static_cast<std::int64_t>(static_cast<std::int32_t>(word));
}

CnfFormula to_cnf(const Circuit& circuit, const SpaceBinding& binding, const InputSpace& space) {
  CnfFormula formula;
  const auto& nodes = circuit.nodes();
  // one variable per node; var(i) = i + 1
  formula.num_vars = static_cast<int>(nodes.size());
  auto var = [](NodeId id) { return static_cast<int>(id) + 1; };

  formula.clauses.push_back({-var(circuit.const_false())});
  formula.clauses.push_back({var(circuit.const_true())});

  for (size_t i = 2; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    int o = var(static_cast<NodeId>(i));
    int a = n.a >= 0 ? var(n.a) : 0;
    int b = n.b >= 0 ? var(n.b) : 0;
    switch (n.kind) {
      case Circuit::Kind::Input:
        break;
      case Circuit::Kind::Not:
        formula.clauses.push_back({-o, -a});
        formula.clauses.push_back({o, a});
        break;
      case Circuit::Kind::And:
        formula.clauses.push_back({-o, a});
        formula.clauses.push_back({-o, b});
        formula.clauses.push_back({o, -a, -b});
        break;
      case Circuit::Kind::Or:
        formula.clauses.push_back({o, -a});
        formula.clauses.push_back({o, -b});
        formula.clauses.push_back({-o, a, b});
        break;
      case Circuit::Kind::Xor:
        formula.clauses.push_back({-o, a, b});
        formula.clauses.push_back({-o, -a, -b});
        formula.clauses.push_back({o, -a, b});
        formula.clauses.push_back({o, a, -b});
        break;
      default:
        fail(ErrorCode::Internal, "constant node after prologue");
    }
  }

  // assert the domain side conditions
  formula.clauses.push_back({var(circuit.domain_constraint())});

  auto group_of = [&](int param_index) {
    CnfFormula::VarGroup group;
    const auto& input = circuit.inputs()[static_cast<size_t>(param_index)];
    group.name = input.name;
    for (NodeId bit : input.bits) group.vars.push_back(var(bit));
    return group;
  };
  formula.g_inputs.push_back(group_of(binding.protected_param));
  for (size_t i = 0; i < space.unprotected.size(); ++i) {
    formula.u_inputs.push_back(group_of(binding.unprotected_params[i]));
  }
  for (NodeId bit : circuit.output_bits()) formula.d_vars.push_back(var(bit));
  return formula;
}

void write_dimacs(const CnfFormula& formula, std::ostream& os) {
  auto show = [&](const char* tag, const std::vector<int>& vars) {
    os << "c " << tag;
    for (int v : vars) os << " " << v;
    os << "\n";
  };
  os << "c projected-count formula; 'show' lists the projection variables\n";
  std::vector<int> show_vars;
  for (const auto& group : formula.u_inputs) {
    show(("u " + group.name).c_str(), group.vars);
    show_vars.insert(show_vars.end(), group.vars.begin(), group.vars.end());
  }
  show("d", formula.d_vars);
  show_vars.insert(show_vars.end(), formula.d_vars.begin(), formula.d_vars.end());
  os << "c p show";
  for (int v : show_vars) os << " " << v;
  os << " 0\n";
  os << "p cnf " << formula.num_vars << " " << formula.clauses.size() << "\n";
  for (const auto& clause : formula.clauses) {
    for (int lit : clause) os << lit << " ";
    os << "0\n";
  }
}

} // namespace fairflow::engine
