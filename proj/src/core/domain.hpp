#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace fairflow {

// A finite, non-empty set of integers: either a contiguous range [lo, hi] or
// an explicit sorted set. Used for input domains, output domains and class
// sets alike.
class Domain {
 public:
  static Domain interval(std::int64_t lo, std::int64_t hi);
  static Domain explicit_set(std::vector<std::int64_t> values); // sorted, deduped -> error on dup

  bool is_interval() const { return is_interval_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  const std::vector<std::int64_t>& values() const { return values_; } // explicit sets only

  std::int64_t size() const;
  std::int64_t value_at(std::int64_t index) const; // ascending order
  bool contains(std::int64_t v) const;
  std::int64_t index_of(std::int64_t v) const; // -1 if absent

  bool operator==(const Domain& o) const;
  bool operator!=(const Domain& o) const { return !(*this == o); }

  std::string to_string() const; // "[1, 10]" or "{0, 100}"

 private:
  bool is_interval_ = true;
  std::int64_t lo_ = 0, hi_ = 0;
  std::vector<std::int64_t> values_;
};

// Exact probability distribution over a Domain: uniform, or an explicit pmf
// whose support is contained in the domain and whose masses sum to 1.
class Distribution {
 public:
  enum class Kind { Uniform, Pmf };

  static Distribution uniform();
  static Distribution pmf(std::map<std::int64_t, Rational> masses);

  Kind kind() const { return kind_; }
  bool is_uniform() const { return kind_ == Kind::Uniform; }
  const std::map<std::int64_t, Rational>& masses() const { return masses_; }

  // Mass of `v` within `domain` (0 for pmf values outside the support).
  Rational mass(const Domain& domain, std::int64_t v) const;

  // Checks pmf invariants against the carrier domain; throws on violation.
  void validate(const Domain& domain, const std::string& name) const;

  bool operator==(const Distribution& o) const;

 private:
  Kind kind_ = Kind::Uniform;
  std::map<std::int64_t, Rational> masses_;
};

} // namespace fairflow
