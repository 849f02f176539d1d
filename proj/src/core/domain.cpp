#include "core/domain.hpp"

#include <algorithm>

#include "core/diag.hpp"

namespace fairflow {

Domain Domain::interval(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(ErrorCode::DomainMismatch, "empty domain: hi < lo");
  Domain d;
  d.is_interval_ = true;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Domain Domain::explicit_set(std::vector<std::int64_t> values) {
  if (values.empty()) fail(ErrorCode::DomainMismatch, "empty explicit domain");
  std::sort(values.begin(), values.end());
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    fail(ErrorCode::DomainMismatch, "duplicate value in explicit domain");
  }
  Domain d;
  d.is_interval_ = false;
  d.lo_ = values.front();
  d.hi_ = values.back();
  d.values_ = std::move(values);
  return d;
}

std::int64_t Domain::size() const {
  return is_interval_ ? hi_ - lo_ + 1 : static_cast<std::int64_t>(values_.size());
}

std::int64_t Domain::value_at(std::int64_t index) const {
  return is_interval_ ? lo_ + index : values_[static_cast<size_t>(index)];
}

bool Domain::contains(std::int64_t v) const {
  if (is_interval_) return v >= lo_ && v <= hi_;
  return std::binary_search(values_.begin(), values_.end(), v);
}

std::int64_t Domain::index_of(std::int64_t v) const {
  if (is_interval_) return (v >= lo_ && v <= hi_) ? v - lo_ : -1;
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return -1;
  return it - values_.begin();
}

bool Domain::operator==(const Domain& o) const {
  if (size() != o.size()) return false;
  for (std::int64_t i = 0; i < size(); ++i) {
    if (value_at(i) != o.value_at(i)) return false;
  }
  return true;
}

std::string Domain::to_string() const {
  if (is_interval_) return "[" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]";
  std::string out = "{";
  for (size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values_[i]);
  }
  return out + "}";
}

Distribution Distribution::uniform() {
  return Distribution{};
}

Distribution Distribution::pmf(std::map<std::int64_t, Rational> masses) {
  Distribution d;
  d.kind_ = Kind::Pmf;
  d.masses_ = std::move(masses);
  return d;
}

Rational Distribution::mass(const Domain& domain, std::int64_t v) const {
  if (kind_ == Kind::Uniform) {
    return Rational(1) / Rational::from_int64(domain.size());
  }
  auto it = masses_.find(v);
  return it == masses_.end() ? Rational(0) : it->second;
}

void Distribution::validate(const Domain& domain, const std::string& name) const {
  if (kind_ == Kind::Uniform) return;
  Rational total(0);
  for (const auto& [v, p] : masses_) {
    if (!domain.contains(v)) {
      fail(ErrorCode::DomainMismatch,
           "pmf for '" + name + "' has mass at " + std::to_string(v) + " outside domain " +
               domain.to_string());
    }
    if (p.is_negative()) {
      fail(ErrorCode::Config, "pmf for '" + name + "' has negative mass at " + std::to_string(v));
    }
    total += p;
  }
  if (total != Rational(1)) {
    fail(ErrorCode::Config,
         "pmf for '" + name + "' sums to " + total.to_string() + ", expected 1");
  }
}

bool Distribution::operator==(const Distribution& o) const {
  return kind_ == o.kind_ && masses_ == o.masses_;
}

} // namespace fairflow
