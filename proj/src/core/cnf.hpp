#pragma once

#include <iosfwd>

#include "core/circuit.hpp"

namespace fairflow::engine {

// Tseitin encoding of a circuit. Variables are 1-based DIMACS ids; literals
// are signed ints. The formula asserts the domain side conditions; output and
// input bits stay free so projections can read them off models.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  struct VarGroup {
    std::string name;
    std::vector<int> vars; // 32 per input, LSB first
  };
  std::vector<VarGroup> g_inputs; // protected parameter(s)
  std::vector<VarGroup> u_inputs; // unprotected parameters, space order
  std::vector<int> d_vars;        // decision bits, LSB first

  std::int64_t decode(const VarGroup& group, const std::vector<bool>& model) const;
  std::int64_t decode_output(const std::vector<bool>& model) const;
};

// `binding` tags which circuit inputs are protected vs unprotected (space
// component order); projection sets stay disjoint by construction.
CnfFormula to_cnf(const Circuit& circuit, const SpaceBinding& binding,
                  const InputSpace& space);

// Standard DIMACS CNF; projection sets listed in `c p show ... 0` comments.
void write_dimacs(const CnfFormula& formula, std::ostream& os);

} // namespace fairflow::engine
