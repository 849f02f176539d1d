#include "core/qualitative.hpp"

#include <map>

#include "core/parallel.hpp"

namespace fairflow {

namespace {

using dsl::ValidatedProgram;

void require_same_signature(const ValidatedProgram& p, const ValidatedProgram& other,
                            const char* role) {
  const auto& pp = p.program().params;
  const auto& op = other.program().params;
  if (pp.size() != op.size()) {
    fail(ErrorCode::DomainMismatch,
         std::string(role) + " '" + other.program().name + "' must take the same inputs as '" +
             p.program().name + "'");
  }
  for (const auto& param : pp) {
    int idx = other.program().param_index(param.name);
    if (idx < 0 || !(op[static_cast<size_t>(idx)].domain == param.domain)) {
      fail(ErrorCode::DomainMismatch,
           std::string(role) + " '" + other.program().name + "' must declare parameter '" +
               param.name + " : " + param.domain.to_string() + "'");
    }
  }
}

void require_boolean_output(const ValidatedProgram& p, const char* role) {
  if (!p.output_is_boolean()) {
    fail(ErrorCode::DomainMismatch,
         std::string(role) + " '" + p.program().name + "' must be boolean-valued; inferred " +
             p.output_domain().to_string());
  }
}

Counterexample make_witness(const InputSpace& space, const UPoint& u, std::int64_t g1,
                            std::int64_t g2, std::int64_t d1, std::int64_t d2) {
  Counterexample cx;
  cx.g1 = g1;
  cx.g2 = g2;
  cx.d1 = d1;
  cx.d2 = d2;
  for (size_t i = 0; i < space.unprotected.size(); ++i) {
    cx.u.emplace_back(space.unprotected[i].name, u.values[i]);
  }
  return cx;
}

// Shared scan for the two-run checks. `guard(g1, g2, u_args)` decides whether
// the pair is constrained; the first violation in (u, g1, g2) order wins.
template <typename Guard>
Verdict scan_pairs(const ValidatedProgram& p, const InputSpace& space, const CheckOptions& opts,
                   Guard guard) {
  SpaceBinding binding = SpaceBinding::bind(p, space);
  const Domain& gdom = space.protected_input.domain;
  std::vector<UPoint> points = u_points(space, opts.enumeration);

  struct ChunkResult {
    std::optional<Counterexample> witness;
    std::int64_t u_index = -1;
  };

  auto scan = [&](std::int64_t begin, std::int64_t end) -> ChunkResult {
    std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
    std::vector<std::int64_t> decisions(static_cast<size_t>(gdom.size()), 0);
    for (std::int64_t ui = begin; ui < end; ++ui) {
      const UPoint& u = points[static_cast<size_t>(ui)];
      for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
        binding.fill_args(gdom.value_at(gi), u.values, args);
        decisions[static_cast<size_t>(gi)] = dsl::evaluate_ordered(p, args.data());
      }
      for (std::int64_t i = 0; i < gdom.size(); ++i) {
        for (std::int64_t j = 0; j < gdom.size(); ++j) {
          if (i == j) continue;
          std::int64_t g1 = gdom.value_at(i), g2 = gdom.value_at(j);
          std::int64_t d1 = decisions[static_cast<size_t>(i)];
          std::int64_t d2 = decisions[static_cast<size_t>(j)];
          if (d1 == d2) continue;
          if (!guard(g1, g2, u)) continue;
          return ChunkResult{make_witness(space, u, g1, g2, d1, d2), ui};
        }
      }
    }
    return ChunkResult{};
  };

  auto results = run_chunked<ChunkResult>(static_cast<std::int64_t>(points.size()),
                                          opts.jobs, scan);
  for (const auto& r : results) {
    if (r.witness) return Verdict{false, r.witness};
  }
  return Verdict{true, std::nullopt};
}

} // namespace

Verdict check_unconditional_ni(const ValidatedProgram& p, const InputSpace& space,
                               const CheckOptions& opts) {
  return scan_pairs(p, space, opts,
                    [](std::int64_t, std::int64_t, const UPoint&) { return true; });
}

Verdict check_restricted_if(const ValidatedProgram& p, const ValidatedProgram& r,
                            const InputSpace& space, const CheckOptions& opts) {
  require_same_signature(p, r, "restricted classification");
  SpaceBinding rbinding = SpaceBinding::bind(r, space);
  return scan_pairs(p, space, opts, [&](std::int64_t g1, std::int64_t g2, const UPoint& u) {
    thread_local std::vector<std::int64_t> args;
    args.assign(static_cast<size_t>(r.param_count()), 0);
    rbinding.fill_args(g1, u.values, args);
    std::int64_t c1 = dsl::evaluate_ordered(r, args.data());
    rbinding.fill_args(g2, u.values, args);
    std::int64_t c2 = dsl::evaluate_ordered(r, args.data());
    return c1 == c2;
  });
}

Verdict check_conditional_if(const ValidatedProgram& p, const ValidatedProgram& psi,
                             const InputSpace& space, const CheckOptions& opts) {
  require_same_signature(p, psi, "declassification predicate");
  require_boolean_output(psi, "declassification predicate");
  SpaceBinding pbinding = SpaceBinding::bind(psi, space);
  return scan_pairs(p, space, opts, [&](std::int64_t g1, std::int64_t g2, const UPoint& u) {
    thread_local std::vector<std::int64_t> args;
    args.assign(static_cast<size_t>(psi.param_count()), 0);
    pbinding.fill_args(g1, u.values, args);
    std::int64_t v1 = dsl::evaluate_ordered(psi, args.data());
    pbinding.fill_args(g2, u.values, args);
    std::int64_t v2 = dsl::evaluate_ordered(psi, args.data());
    return v1 == 0 && v2 == 0;
  });
}

namespace {

struct ParityAccumulator {
  // mass[gi][di] (conditioned numerators) and per-group conditioning mass
  std::vector<std::vector<Rational>> mass;
  std::vector<Rational> total;
};

ParityResult parity_impl(const ValidatedProgram& p, const InputSpace& space,
                         const ValidatedProgram* cond, const Rational& tol,
                         const CheckOptions& opts) {
  space.validate();
  SpaceBinding binding = SpaceBinding::bind(p, space);
  SpaceBinding cond_binding = cond ? SpaceBinding::bind(*cond, space) : binding;
  if (cond) {
    require_same_signature(p, *cond, "parity condition");
    require_boolean_output(*cond, "parity condition");
  }

  const Domain& gdom = space.protected_input.domain;
  for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
    if (space.g_mass(gdom.value_at(gi)).is_zero()) {
      fail(ErrorCode::ZeroMassGroup,
           "group " + std::to_string(gdom.value_at(gi)) + " has probability 0");
    }
  }

  const Domain& out_dom = p.output_domain();
  std::map<std::int64_t, size_t> out_index;
  std::vector<std::int64_t> outcomes;
  for (std::int64_t di = 0; di < out_dom.size(); ++di) {
    out_index[out_dom.value_at(di)] = static_cast<size_t>(di);
    outcomes.push_back(out_dom.value_at(di));
  }

  std::vector<UPoint> points = u_points(space, opts.enumeration);

  auto accumulate = [&](std::int64_t begin, std::int64_t end) -> ParityAccumulator {
    ParityAccumulator acc;
    acc.mass.assign(static_cast<size_t>(gdom.size()),
                    std::vector<Rational>(outcomes.size(), Rational(0)));
    acc.total.assign(static_cast<size_t>(gdom.size()), Rational(0));
    std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
    for (std::int64_t ui = begin; ui < end; ++ui) {
      const UPoint& u = points[static_cast<size_t>(ui)];
      if (u.weight.is_zero()) continue;
      for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
        std::int64_t g = gdom.value_at(gi);
        if (cond) {
          cond_binding.fill_args(g, u.values, args);
          if (dsl::evaluate_ordered(*cond, args.data()) == 0) continue;
        }
        binding.fill_args(g, u.values, args);
        std::int64_t d = dsl::evaluate_ordered(p, args.data());
        acc.mass[static_cast<size_t>(gi)][out_index.at(d)] += u.weight;
        acc.total[static_cast<size_t>(gi)] += u.weight;
      }
    }
    return acc;
  };

  auto chunks = run_chunked<ParityAccumulator>(static_cast<std::int64_t>(points.size()),
                                               opts.jobs, accumulate);
  ParityAccumulator acc;
  acc.mass.assign(static_cast<size_t>(gdom.size()),
                  std::vector<Rational>(outcomes.size(), Rational(0)));
  acc.total.assign(static_cast<size_t>(gdom.size()), Rational(0));
  for (const auto& chunk : chunks) {
    for (size_t gi = 0; gi < acc.mass.size(); ++gi) {
      acc.total[gi] += chunk.total[gi];
      for (size_t di = 0; di < outcomes.size(); ++di) {
        acc.mass[gi][di] += chunk.mass[gi][di];
      }
    }
  }

  ParityResult result;
  result.table.outcomes = outcomes;
  for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
    result.table.groups.push_back(gdom.value_at(gi));
    if (acc.total[static_cast<size_t>(gi)].is_zero()) {
      if (cond) {
        fail(ErrorCode::ZeroMassCondition,
             "conditioned event has probability 0 for group " +
                 std::to_string(gdom.value_at(gi)));
      }
      fail(ErrorCode::ZeroMassCondition, "unprotected space has total probability 0");
    }
    std::vector<Rational> row;
    for (size_t di = 0; di < outcomes.size(); ++di) {
      row.push_back(acc.mass[static_cast<size_t>(gi)][di] / acc.total[static_cast<size_t>(gi)]);
    }
    result.table.rows.push_back(std::move(row));
  }

  result.table.max_gap = Rational(0);
  for (size_t di = 0; di < outcomes.size(); ++di) {
    for (size_t i = 0; i < result.table.groups.size(); ++i) {
      for (size_t j = 0; j < result.table.groups.size(); ++j) {
        Rational gap = result.table.rows[i][di] - result.table.rows[j][di];
        if (gap > result.table.max_gap) {
          result.table.max_gap = gap;
          result.table.gap_g1 = result.table.groups[i];
          result.table.gap_g2 = result.table.groups[j];
          result.table.gap_d = outcomes[di];
        }
      }
    }
  }
  result.holds = result.table.max_gap <= tol;

  if (!result.holds) {
    // pointwise witness for the gap argmax pair, when one exists
    std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
    for (const UPoint& u : points) {
      binding.fill_args(result.table.gap_g1, u.values, args);
      std::int64_t d1 = dsl::evaluate_ordered(p, args.data());
      binding.fill_args(result.table.gap_g2, u.values, args);
      std::int64_t d2 = dsl::evaluate_ordered(p, args.data());
      if (d1 != d2) {
        result.witness =
            make_witness(space, u, result.table.gap_g1, result.table.gap_g2, d1, d2);
        break;
      }
    }
  }
  return result;
}

} // namespace

ParityResult demographic_parity(const ValidatedProgram& p, const InputSpace& space,
                                const Rational& tol, const CheckOptions& opts) {
  return parity_impl(p, space, nullptr, tol, opts);
}

ParityResult conditional_demographic_parity(const ValidatedProgram& p,
                                            const ValidatedProgram& cond,
                                            const InputSpace& space, const Rational& tol,
                                            const CheckOptions& opts) {
  return parity_impl(p, space, &cond, tol, opts);
}

} // namespace fairflow
