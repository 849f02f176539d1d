#include "core/space.hpp"

#include <numeric>
#include <set>

#include "core/parser.hpp"

namespace fairflow {

void InputSpace::validate() const {
  std::set<std::string> names;
  names.insert(protected_input.name);
  protected_input.dist.validate(protected_input.domain, protected_input.name);
  for (const auto& comp : unprotected) {
    if (!names.insert(comp.name).second) {
      fail(ErrorCode::Config, "duplicate input name '" + comp.name + "'");
    }
    comp.dist.validate(comp.domain, comp.name);
  }
}

std::int64_t InputSpace::u_point_count() const {
  std::int64_t count = 1;
  for (const auto& comp : unprotected) {
    count *= comp.domain.size();
    if (count < 0 || count > kDefaultSpaceCap * 64) {
      fail(ErrorCode::SpaceTooLarge, "unprotected space exceeds representable size");
    }
  }
  return count;
}

std::int64_t InputSpace::total_point_count() const {
  std::int64_t u = u_point_count();
  std::int64_t total = u * group_count();
  if (total < 0 || (u != 0 && total / u != group_count())) {
    fail(ErrorCode::SpaceTooLarge, "input space exceeds representable size");
  }
  return total;
}

bool InputSpace::u_all_uniform() const {
  for (const auto& comp : unprotected) {
    if (!comp.dist.is_uniform()) return false;
  }
  return true;
}

namespace {

void check_cap(std::int64_t points, std::int64_t cap) {
  if (points > cap) {
    fail(ErrorCode::SpaceTooLarge,
         "enumeration over " + std::to_string(points) + " points exceeds cap " +
             std::to_string(cap) + " (raise the space cap to proceed)");
  }
}

} // namespace

void for_each_components(const std::vector<SpaceComponent>& components,
                         const EnumerationOptions& opts,
                         const std::function<void(const UPoint&)>& fn) {
  std::int64_t count = 1;
  for (const auto& comp : components) {
    count *= comp.domain.size();
    if (count < 0) fail(ErrorCode::SpaceTooLarge, "space exceeds representable size");
  }
  check_cap(count, opts.space_cap);
  const size_t n = components.size();

  UPoint point;
  point.values.assign(n, 0);
  std::vector<std::int64_t> index(n, 0);
  std::vector<Rational> masses(n, Rational(1));
  for (size_t i = 0; i < n; ++i) {
    point.values[i] = components[i].domain.value_at(0);
    masses[i] = components[i].dist.mass(components[i].domain, point.values[i]);
  }
  for (;;) {
    Rational w(1);
    for (size_t i = 0; i < n; ++i) w *= masses[i];
    point.weight = w;
    fn(point);
    size_t k = n;
    while (k > 0 && ++index[k - 1] >= components[k - 1].domain.size()) {
      index[k - 1] = 0;
      point.values[k - 1] = components[k - 1].domain.value_at(0);
      masses[k - 1] = components[k - 1].dist.mass(components[k - 1].domain, point.values[k - 1]);
      --k;
    }
    if (k == 0) break;
    point.values[k - 1] = components[k - 1].domain.value_at(index[k - 1]);
    masses[k - 1] = components[k - 1].dist.mass(components[k - 1].domain, point.values[k - 1]);
  }
}

void for_each_u(const InputSpace& space, const EnumerationOptions& opts,
                const std::function<void(const UPoint&)>& fn) {
  for_each_components(space.unprotected, opts, fn);
}

void for_each_point(const InputSpace& space, const EnumerationOptions& opts,
                    const std::function<void(std::int64_t g, const UPoint&)>& fn) {
  check_cap(space.total_point_count(), opts.space_cap);
  const Domain& gdom = space.protected_input.domain;
  for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
    std::int64_t g = gdom.value_at(gi);
    Rational gw = space.g_mass(g);
    for_each_u(space, opts, [&](const UPoint& u) {
      UPoint joint = u;
      joint.weight = gw * u.weight;
      fn(g, joint);
    });
  }
}

std::vector<UPoint> u_points(const InputSpace& space, const EnumerationOptions& opts) {
  std::vector<UPoint> out;
  out.reserve(static_cast<size_t>(std::min<std::int64_t>(space.u_point_count(), 1 << 20)));
  for_each_u(space, opts, [&](const UPoint& p) { out.push_back(p); });
  return out;
}

SpaceBinding SpaceBinding::bind(const dsl::ValidatedProgram& vp, const InputSpace& space) {
  const auto& params = vp.program().params;
  if (params.size() != space.unprotected.size() + 1) {
    fail(ErrorCode::DomainMismatch,
         "program '" + vp.program().name + "' has " + std::to_string(params.size()) +
             " parameters but the space declares " +
             std::to_string(space.unprotected.size() + 1) + " inputs");
  }
  auto locate = [&](const SpaceComponent& comp) {
    int idx = vp.program().param_index(comp.name);
    if (idx < 0) {
      fail(ErrorCode::DomainMismatch,
           "space input '" + comp.name + "' is not a parameter of program '" +
               vp.program().name + "'");
    }
    if (!(params[static_cast<size_t>(idx)].domain == comp.domain)) {
      fail(ErrorCode::DomainMismatch,
           "domain of '" + comp.name + "' differs between program (" +
               params[static_cast<size_t>(idx)].domain.to_string() + ") and space (" +
               comp.domain.to_string() + ")");
    }
    return idx;
  };

  SpaceBinding binding;
  binding.protected_param = locate(space.protected_input);
  binding.unprotected_params.reserve(space.unprotected.size());
  for (const auto& comp : space.unprotected) {
    binding.unprotected_params.push_back(locate(comp));
  }
  return binding;
}

void SpaceBinding::fill_args(std::int64_t g, const std::vector<std::int64_t>& u_values,
                             std::vector<std::int64_t>& args) const {
  args[static_cast<size_t>(protected_param)] = g;
  for (size_t i = 0; i < unprotected_params.size(); ++i) {
    args[static_cast<size_t>(unprotected_params[i])] = u_values[i];
  }
}

namespace {

std::int64_t lcm_i64(std::int64_t a, std::int64_t b) {
  return a / std::gcd(a, b) * b;
}

// Builds the nested-conditional lookup mapping selector w in [0, size) to the
// pmf's support values by cumulative counts.
dsl::ExprPtr build_lookup(const std::string& selector,
                          const std::vector<std::pair<std::int64_t, std::int64_t>>& value_counts) {
  using namespace dsl;
  // value_counts: (value, point count), in ascending value order.
  std::int64_t cumulative = 0;
  ExprPtr expr;
  // Build from the last value backwards: (w < c1) ? v1 : (w < c2) ? v2 : ... vk
  std::vector<std::pair<std::int64_t, std::int64_t>> thresholds; // (cutoff, value)
  for (const auto& [value, count] : value_counts) {
    cumulative += count;
    thresholds.emplace_back(cumulative, value);
  }
  expr = make_int(thresholds.back().second);
  for (size_t i = thresholds.size() - 1; i-- > 0;) {
    expr = make_cond(
        make_binary(BinOp::Lt, make_var(selector), make_int(thresholds[i].first)),
        make_int(thresholds[i].second), std::move(expr));
  }
  return expr;
}

} // namespace

UniformWrapResult wrap_to_uniform(const dsl::ValidatedProgram& vp, const InputSpace& space) {
  UniformWrapResult result;
  result.space = space;

  if (space.u_all_uniform()) {
    result.program = vp.clone();
    result.changed = false;
    return result;
  }

  dsl::DecisionProgram program = vp.program().clone();
  std::vector<dsl::StmtPtr> prologue;

  for (size_t ci = 0; ci < space.unprotected.size(); ++ci) {
    SpaceComponent& comp = result.space.unprotected[ci];
    if (comp.dist.is_uniform()) continue;

    // Selector size = lcm of pmf denominators; every mass becomes an integer
    // point count, so the selector is exactly uniform.
    mpz_class lcm_den = 1;
    for (const auto& [value, mass] : comp.dist.masses()) {
      (void)value;
      mpz_class den(mass.denominator());
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
    }
    if (!lcm_den.fits_slong_p()) {
      fail(ErrorCode::SpaceTooLarge,
           "pmf for '" + comp.name + "' needs a uniform selector of size " + lcm_den.get_str());
    }
    std::int64_t size = lcm_den.get_si();

    std::vector<std::pair<std::int64_t, std::int64_t>> value_counts;
    for (const auto& [value, mass] : comp.dist.masses()) {
      if (mass.is_zero()) continue;
      Rational count = mass * Rational::from_int64(size);
      if (!count.is_integer()) {
        fail(ErrorCode::Internal, "selector size is not a common denominator");
      }
      value_counts.emplace_back(value, std::stoll(count.numerator()));
    }

    std::string selector = comp.name + "_sel";
    while (program.param_index(selector) >= 0) selector += "_";

    int pidx = program.param_index(comp.name);
    if (pidx < 0) {
      fail(ErrorCode::DomainMismatch,
           "space input '" + comp.name + "' is not a parameter of program '" + program.name + "'");
    }
    program.params[static_cast<size_t>(pidx)] =
        dsl::Param{selector, Domain::interval(0, size - 1), {}};

    auto let = std::make_unique<dsl::Stmt>();
    let->node = dsl::Stmt::Assign{comp.name, build_lookup(selector, value_counts), true, -1};
    prologue.push_back(std::move(let));

    comp = SpaceComponent{selector, Domain::interval(0, size - 1), Distribution::uniform()};
    result.wrapped.push_back({space.unprotected[ci].name, selector, size});
    result.changed = true;
  }

  for (auto it = prologue.rbegin(); it != prologue.rend(); ++it) {
    program.body.insert(program.body.begin(), std::move(*it));
  }
  result.program = dsl::typecheck(program);
  return result;
}

} // namespace fairflow
