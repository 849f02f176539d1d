#pragma once

#include "core/config.hpp"

namespace fairflow {

Json metric_to_json(const MetricValue& metric);
Json counterexample_to_json(const Counterexample& cx);
Json verdict_to_json(const Verdict& verdict);
Json parity_to_json(const ParityResult& parity, const Rational& tol);
Json per_u_to_json(const InputSpace& space, const std::vector<Rational>& per_u,
                   size_t cap = 1000);

// Derived human rendering; the JSON document is the contract.
std::string render_text(const Json& report);

} // namespace fairflow
