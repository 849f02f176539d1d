#include "core/report.hpp"

#include <sstream>

namespace fairflow {

Json metric_to_json(const MetricValue& metric) {
  return Json{{"exact", metric.exact.to_string()},
              {"decimal", metric.decimal},
              {"backend", backend_name(metric.backend)}};
}

Json counterexample_to_json(const Counterexample& cx) {
  Json u = Json::object();
  for (const auto& [name, value] : cx.u) u[name] = value;
  return Json{{"g1", cx.g1}, {"g2", cx.g2}, {"u", u}, {"d1", cx.d1}, {"d2", cx.d2}};
}

Json verdict_to_json(const Verdict& verdict) {
  Json out{{"holds", verdict.holds}};
  out["witness"] = verdict.witness ? counterexample_to_json(*verdict.witness) : Json(nullptr);
  return out;
}

Json parity_to_json(const ParityResult& parity, const Rational& tol) {
  Json rows = Json::array();
  for (size_t gi = 0; gi < parity.table.groups.size(); ++gi) {
    Json outcomes = Json::object();
    for (size_t di = 0; di < parity.table.outcomes.size(); ++di) {
      outcomes[std::to_string(parity.table.outcomes[di])] = parity.table.rows[gi][di].to_string();
    }
    rows.push_back(Json{{"g", parity.table.groups[gi]}, {"outcomes", outcomes}});
  }
  Json out{{"rows", rows},
           {"max_gap",
            Json{{"exact", parity.table.max_gap.to_string()},
                 {"decimal", parity.table.max_gap.to_decimal(kDecimalPlaces)}}},
           {"tol", tol.to_string()},
           {"holds", parity.holds}};
  if (!parity.holds) {
    out["gap_argmax"] = Json{{"g1", parity.table.gap_g1},
                             {"g2", parity.table.gap_g2},
                             {"d", parity.table.gap_d}};
  }
  out["witness"] = parity.witness ? counterexample_to_json(*parity.witness) : Json(nullptr);
  return out;
}

Json per_u_to_json(const InputSpace& space, const std::vector<Rational>& per_u, size_t cap) {
  if (per_u.size() > cap) {
    return Json{{"omitted", true}, {"points", per_u.size()}};
  }
  Json out = Json::array();
  size_t index = 0;
  for_each_u(space, EnumerationOptions{}, [&](const UPoint& point) {
    Json u = Json::object();
    for (size_t i = 0; i < space.unprotected.size(); ++i) {
      u[space.unprotected[i].name] = point.values[i];
    }
    const Rational& gap = per_u[index++];
    out.push_back(Json{{"u", u},
                       {"spread", gap.to_string()},
                       {"decimal", gap.to_decimal(kDecimalPlaces)}});
  });
  return out;
}

namespace {

void render_value(std::ostringstream& os, const std::string& indent, const std::string& key,
                  const Json& value) {
  if (value.is_object()) {
    os << indent << key << ":\n";
    for (const auto& [k, v] : value.items()) render_value(os, indent + "  ", k, v);
  } else if (value.is_array()) {
    os << indent << key << ": [" << value.size() << " entries]\n";
    if (value.size() <= 24) {
      for (const auto& v : value) {
        os << indent << "  - " << v.dump() << "\n";
      }
    }
  } else if (value.is_null()) {
    os << indent << key << ": -\n";
  } else {
    os << indent << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
  }
}

} // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  os << report.value("tool", "fairflow") << " " << report.value("version", "")
     << " — " << report.value("analysis", "") << "\n";
  if (report.contains("results")) {
    for (const auto& [key, value] : report.at("results").items()) {
      render_value(os, "", key, value);
    }
  }
  if (report.contains("timings")) {
    for (const auto& [key, value] : report.at("timings").items()) {
      os << "time " << key << ": " << value.dump() << " ms\n";
    }
  }
  return os.str();
}

} // namespace fairflow
