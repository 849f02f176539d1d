#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/typecheck.hpp"

namespace fairflow {

struct SpaceComponent {
  std::string name;
  Domain domain;
  Distribution dist;
};

// The single protected input G plus the ordered unprotected components whose
// product forms U. Protected and unprotected variables are independent by
// construction (the joint distribution is the product).
struct InputSpace {
  SpaceComponent protected_input;
  std::vector<SpaceComponent> unprotected;

  void validate() const; // distinct names, pmf invariants

  std::int64_t group_count() const { return protected_input.domain.size(); }
  std::int64_t u_point_count() const;     // |U| (throws SpaceTooLarge past cap)
  std::int64_t total_point_count() const; // |G x U|

  bool u_all_uniform() const;
  bool g_uniform() const { return protected_input.dist.is_uniform(); }

  Rational g_mass(std::int64_t g) const {
    return protected_input.dist.mass(protected_input.domain, g);
  }
};

inline constexpr std::int64_t kDefaultSpaceCap = 100000000; // 10^8 points

struct EnumerationOptions {
  std::int64_t space_cap = kDefaultSpaceCap;
};

// One unprotected point: component values in declaration order plus its exact
// probability Pr[U=u].
struct UPoint {
  std::vector<std::int64_t> values;
  Rational weight;
};

// Yields every point of a component product exactly once, in lexicographic
// order (each component ascending). Weights are the product of per-component
// masses and sum to exactly 1.
void for_each_components(const std::vector<SpaceComponent>& components,
                         const EnumerationOptions& opts,
                         const std::function<void(const UPoint&)>& fn);

// Same over the unprotected components of a space.
void for_each_u(const InputSpace& space, const EnumerationOptions& opts,
                const std::function<void(const UPoint&)>& fn);

// Yields every point of G x U exactly once with its product probability,
// g-major (outer loop over G in ascending order, inner lexicographic U).
void for_each_point(const InputSpace& space, const EnumerationOptions& opts,
                    const std::function<void(std::int64_t g, const UPoint&)>& fn);

// Materialized u-points (desk-scale spaces); same order as for_each_u.
std::vector<UPoint> u_points(const InputSpace& space, const EnumerationOptions& opts = {});

// Maps space components to program parameter positions; validates that the
// parameter list matches the space's declared inputs (names as a set, equal
// domains). Throws DomainMismatch otherwise.
struct SpaceBinding {
  int protected_param = -1;
  std::vector<int> unprotected_params;

  static SpaceBinding bind(const dsl::ValidatedProgram& vp, const InputSpace& space);

  // Writes (g, u) into an argument buffer laid out in program-parameter order.
  void fill_args(std::int64_t g, const std::vector<std::int64_t>& u_values,
                 std::vector<std::int64_t>& args) const;
};

// Result of compiling non-uniform unprotected components into enlarged
// uniform selector domains plus lookup prologues, so uniform-only backends
// apply. The transformed program and space are equivalent to the originals:
// every analysis metric agrees between the two routes.
struct UniformWrapResult {
  dsl::ValidatedProgram program;
  InputSpace space;
  bool changed = false;
  struct WrappedComponent {
    std::string original;  // component name in the source space
    std::string selector;  // uniform selector parameter name
    std::int64_t size;     // selector domain size (lcm of pmf denominators)
  };
  std::vector<WrappedComponent> wrapped;
};

UniformWrapResult wrap_to_uniform(const dsl::ValidatedProgram& vp, const InputSpace& space);

} // namespace fairflow
