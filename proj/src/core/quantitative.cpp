#include "core/quantitative.hpp"

#include <algorithm>

#include "core/parallel.hpp"

namespace fairflow {

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::Enumeration: return "enumeration";
    case Backend::Counting: return "counting";
    case Backend::Cpt: return "cpt";
  }
  return "unknown";
}

MetricValue MetricValue::of(Rational value, Backend backend) {
  MetricValue mv;
  mv.decimal = value.to_decimal(kDecimalPlaces);
  mv.exact = std::move(value);
  mv.backend = backend;
  return mv;
}

OutcomeTable::OutcomeTable(std::vector<std::int64_t> groups,
                           std::vector<std::vector<std::int64_t>> u_pts,
                           std::vector<std::int64_t> outcomes)
    : groups_(std::move(groups)), u_points_(std::move(u_pts)), outcomes_(std::move(outcomes)) {
  size_t n = groups_.size() * u_points_.size() * outcomes_.size();
  probs_.assign(n, Rational(0));
  present_.assign(groups_.size() * u_points_.size(), false);
}

const Rational& OutcomeTable::prob(size_t gi, size_t ui, size_t di) const {
  return probs_[(gi * u_points_.size() + ui) * outcomes_.size() + di];
}

void OutcomeTable::set_prob(size_t gi, size_t ui, size_t di, Rational p) {
  probs_[(gi * u_points_.size() + ui) * outcomes_.size() + di] = std::move(p);
  present_[gi * u_points_.size() + ui] = true;
}

void OutcomeTable::validate() const {
  for (size_t gi = 0; gi < groups_.size(); ++gi) {
    for (size_t ui = 0; ui < u_points_.size(); ++ui) {
      if (!present_[gi * u_points_.size() + ui]) {
        fail(ErrorCode::IncompleteTable,
             "outcome table has no row for (g=" + std::to_string(groups_[gi]) + ", u point #" +
                 std::to_string(ui) + ")");
      }
      Rational sum(0);
      for (size_t di = 0; di < outcomes_.size(); ++di) {
        const Rational& p = prob(gi, ui, di);
        if (p.is_negative()) {
          fail(ErrorCode::IncompleteTable, "outcome table has a negative probability");
        }
        sum += p;
      }
      if (sum != Rational(1)) {
        fail(ErrorCode::IncompleteTable,
             "outcome-table row (g=" + std::to_string(groups_[gi]) + ", u point #" +
                 std::to_string(ui) + ") sums to " + sum.to_string() + ", expected 1");
      }
    }
  }
}

int OutcomeTable::outcome_index(std::int64_t d) const {
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == d) return static_cast<int>(i);
  }
  return -1;
}

OutcomeTable OutcomeTable::from_program(const dsl::ValidatedProgram& p, const InputSpace& space,
                                        const EnumerationOptions& opts) {
  SpaceBinding binding = SpaceBinding::bind(p, space);
  const Domain& gdom = space.protected_input.domain;

  std::vector<std::int64_t> groups;
  for (std::int64_t gi = 0; gi < gdom.size(); ++gi) groups.push_back(gdom.value_at(gi));

  std::vector<UPoint> points = ::fairflow::u_points(space, opts);
  std::vector<std::vector<std::int64_t>> u_values;
  u_values.reserve(points.size());
  for (const auto& pt : points) u_values.push_back(pt.values);

  const Domain& out_dom = p.output_domain();
  std::vector<std::int64_t> outcomes;
  for (std::int64_t di = 0; di < out_dom.size(); ++di) outcomes.push_back(out_dom.value_at(di));

  OutcomeTable table(std::move(groups), std::move(u_values), std::move(outcomes));
  std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
  for (size_t ui = 0; ui < points.size(); ++ui) {
    for (size_t gi = 0; gi < table.groups_.size(); ++gi) {
      binding.fill_args(table.groups_[gi], points[ui].values, args);
      std::int64_t d = dsl::evaluate_ordered(p, args.data());
      int di = table.outcome_index(d);
      if (di < 0) fail(ErrorCode::Internal, "evaluation left the typechecked output domain");
      // deterministic program: unit mass on the computed outcome
      for (size_t k = 0; k < table.outcomes_.size(); ++k) {
        table.set_prob(gi, ui, k, Rational(k == static_cast<size_t>(di) ? 1 : 0));
      }
    }
  }
  return table;
}

namespace {

std::vector<Rational> g_marginal(const InputSpace& space) {
  std::vector<Rational> out;
  const Domain& gdom = space.protected_input.domain;
  for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
    out.push_back(space.g_mass(gdom.value_at(gi)));
  }
  return out;
}

std::vector<Rational> u_marginal(const InputSpace& space, const EnumerationOptions& opts) {
  std::vector<Rational> out;
  for_each_u(space, opts, [&](const UPoint& pt) { out.push_back(pt.weight); });
  return out;
}

std::vector<Rational> uniform_dist(size_t n) {
  return std::vector<Rational>(n, Rational(1) / Rational::from_int64(static_cast<std::int64_t>(n)));
}

} // namespace

MetricValue conditional_vulnerability(const OutcomeTable& table,
                                      const std::vector<Rational>& dist_g,
                                      const std::vector<Rational>& dist_u) {
  table.validate();
  if (dist_g.size() != table.groups().size() || dist_u.size() != table.u_points().size()) {
    fail(ErrorCode::IncompleteTable, "distribution size does not match outcome table");
  }
  Rational v(0);
  for (size_t ui = 0; ui < table.u_points().size(); ++ui) {
    for (size_t di = 0; di < table.outcomes().size(); ++di) {
      Rational best(0);
      for (size_t gi = 0; gi < table.groups().size(); ++gi) {
        Rational joint = dist_g[gi] * table.prob(gi, ui, di);
        if (joint > best) best = joint;
      }
      v += dist_u[ui] * best;
    }
  }
  return MetricValue::of(std::move(v), Backend::Cpt);
}

MetricValue conditional_vulnerability(const dsl::ValidatedProgram& p, const InputSpace& space,
                                      const EnumerationOptions& opts) {
  OutcomeTable table = OutcomeTable::from_program(p, space, opts);
  MetricValue mv = conditional_vulnerability(table, g_marginal(space), u_marginal(space, opts));
  mv.backend = Backend::Enumeration;
  return mv;
}

void require_binary_outcome(const Domain& output_domain, std::int64_t favorable) {
  if (output_domain.size() > 2) {
    fail(ErrorCode::NonBinaryOutcome,
         "spread is defined for binary decisions only; output domain is " +
             output_domain.to_string());
  }
  if (output_domain.size() == 2 && !output_domain.contains(favorable)) {
    fail(ErrorCode::NonBinaryOutcome,
         "favorable outcome " + std::to_string(favorable) + " is not in output domain " +
             output_domain.to_string());
  }
}

SpreadResult fairness_spread(const OutcomeTable& table, const std::vector<Rational>& dist_u,
                             std::int64_t favorable) {
  table.validate();
  if (table.outcomes().size() > 2) {
    fail(ErrorCode::NonBinaryOutcome, "spread is defined for binary decisions only");
  }
  if (dist_u.size() != table.u_points().size()) {
    fail(ErrorCode::IncompleteTable, "distribution size does not match outcome table");
  }
  int fav = table.outcome_index(favorable);
  if (fav < 0 && table.outcomes().size() == 2) {
    fail(ErrorCode::NonBinaryOutcome,
         "favorable outcome " + std::to_string(favorable) + " is not an outcome of the table");
  }

  SpreadResult result;
  Rational total(0);
  for (size_t ui = 0; ui < table.u_points().size(); ++ui) {
    Rational lo(1), hi(0);
    for (size_t gi = 0; gi < table.groups().size(); ++gi) {
      // favorable outcome absent entirely => mu is identically 0
      Rational mu = fav < 0 ? Rational(0) : table.prob(gi, ui, static_cast<size_t>(fav));
      if (mu < lo) lo = mu;
      if (mu > hi) hi = mu;
    }
    Rational gap = hi - lo;
    total += dist_u[ui] * gap;
    result.per_u.push_back(std::move(gap));
  }
  result.value = MetricValue::of(std::move(total), Backend::Cpt);
  return result;
}

SpreadResult fairness_spread(const dsl::ValidatedProgram& p, const InputSpace& space,
                             std::int64_t favorable, const EnumerationOptions& opts, int jobs) {
  require_binary_outcome(p.output_domain(), favorable);
  SpaceBinding binding = SpaceBinding::bind(p, space);
  const Domain& gdom = space.protected_input.domain;
  std::vector<UPoint> points = u_points(space, opts);

  struct Chunk {
    Rational total = Rational(0);
    std::vector<Rational> per_u;
  };
  auto work = [&](std::int64_t begin, std::int64_t end) -> Chunk {
    Chunk chunk;
    std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
    for (std::int64_t ui = begin; ui < end; ++ui) {
      const UPoint& u = points[static_cast<size_t>(ui)];
      bool any_favorable = false, any_other = false;
      for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
        binding.fill_args(gdom.value_at(gi), u.values, args);
        (dsl::evaluate_ordered(p, args.data()) == favorable ? any_favorable : any_other) = true;
        if (any_favorable && any_other) break;
      }
      Rational gap(any_favorable && any_other ? 1 : 0);
      chunk.total += u.weight * gap;
      chunk.per_u.push_back(std::move(gap));
    }
    return chunk;
  };

  auto chunks = run_chunked<Chunk>(static_cast<std::int64_t>(points.size()), jobs, work);
  SpreadResult result;
  Rational total(0);
  for (auto& chunk : chunks) {
    total += chunk.total;
    for (auto& g : chunk.per_u) result.per_u.push_back(std::move(g));
  }
  result.value = MetricValue::of(std::move(total), Backend::Enumeration);
  return result;
}

MetricValue fairness_spread_via_vulnerability(const dsl::ValidatedProgram& p,
                                              const InputSpace& space, std::int64_t favorable,
                                              const EnumerationOptions& opts) {
  require_binary_outcome(p.output_domain(), favorable);
  OutcomeTable table = OutcomeTable::from_program(p, space, opts);
  std::vector<Rational> unif_g = uniform_dist(table.groups().size());
  MetricValue v = conditional_vulnerability(table, unif_g, u_marginal(space, opts));
  Rational s = Rational::from_int64(static_cast<std::int64_t>(table.groups().size())) * v.exact -
               Rational(1);
  MetricValue mv = MetricValue::of(std::move(s), Backend::Enumeration);
  return mv;
}

} // namespace fairflow
