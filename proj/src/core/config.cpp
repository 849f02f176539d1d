#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include "core/parser.hpp"

namespace fairflow {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string AnalysisConfig::resolve(const std::string& path) const {
  if (path.empty() || path.front() == '/' || base_dir.empty() || base_dir == ".") return path;
  return base_dir + "/" + path;
}

namespace {

Rational rational_from_json(const Json& v, const char* what) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational::from_int64(v.get<std::int64_t>());
  fail(ErrorCode::Config,
       std::string("write ") + what +
           " as a string (\"3/10\" or \"0.3\"); bare floats lose exactness");
}

Domain domain_from_json(const Json& v, const std::string& name) {
  if (v.is_array()) {
    if (v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      fail(ErrorCode::Config, "domain of '" + name + "' must be [lo, hi]");
    }
    return Domain::interval(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
  }
  if (v.is_object() && v.contains("set")) {
    std::vector<std::int64_t> values;
    for (const auto& x : v.at("set")) {
      if (!x.is_number_integer()) fail(ErrorCode::Config, "set domain values must be integers");
      values.push_back(x.get<std::int64_t>());
    }
    return Domain::explicit_set(std::move(values));
  }
  fail(ErrorCode::Config, "domain of '" + name + "' must be [lo, hi] or {\"set\": [...]}");
}

Distribution dist_from_json(const Json& v, const std::string& name) {
  if (v.is_string() && v.get<std::string>() == "uniform") return Distribution::uniform();
  if (v.is_object() && v.contains("pmf")) {
    std::map<std::int64_t, Rational> masses;
    for (const auto& [key, value] : v.at("pmf").items()) {
      std::int64_t point = 0;
      try {
        point = std::stoll(key);
      } catch (const std::exception&) {
        fail(ErrorCode::Config, "pmf key '" + key + "' of '" + name + "' is not an integer");
      }
      if (!masses.emplace(point, rational_from_json(value, "pmf masses")).second) {
        fail(ErrorCode::Config, "pmf of '" + name + "' lists " + key + " twice");
      }
    }
    return Distribution::pmf(std::move(masses));
  }
  fail(ErrorCode::Config, "dist of '" + name + "' must be \"uniform\" or {\"pmf\": {...}}");
}

Json dist_to_json(const Distribution& dist) {
  if (dist.is_uniform()) return Json("uniform");
  Json pmf = Json::object();
  for (const auto& [v, p] : dist.masses()) pmf[std::to_string(v)] = p.to_string();
  return Json{{"pmf", pmf}};
}

Json domain_to_json(const Domain& domain) {
  if (domain.is_interval()) return Json::array({domain.lo(), domain.hi()});
  Json set = Json::array();
  for (std::int64_t v : domain.values()) set.push_back(v);
  return Json{{"set", set}};
}

} // namespace

InputSpace space_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("inputs") || !doc.at("inputs").is_array()) {
    fail(ErrorCode::Config, "space document must be {\"inputs\": [...]}");
  }
  InputSpace space;
  bool have_protected = false;
  for (const auto& item : doc.at("inputs")) {
    if (!item.contains("name") || !item.contains("role") || !item.contains("domain")) {
      fail(ErrorCode::Config, "each input needs name, role, domain (and optionally dist)");
    }
    SpaceComponent comp;
    comp.name = item.at("name").get<std::string>();
    comp.domain = domain_from_json(item.at("domain"), comp.name);
    comp.dist = item.contains("dist") ? dist_from_json(item.at("dist"), comp.name)
                                      : Distribution::uniform();
    std::string role = item.at("role").get<std::string>();
    if (role == "protected") {
      if (have_protected) fail(ErrorCode::Config, "space declares two protected inputs");
      have_protected = true;
      space.protected_input = std::move(comp);
    } else if (role == "unprotected") {
      space.unprotected.push_back(std::move(comp));
    } else {
      fail(ErrorCode::Config, "role of '" + comp.name + "' must be protected or unprotected");
    }
  }
  if (!have_protected) fail(ErrorCode::Config, "space declares no protected input");
  space.validate();
  return space;
}

Json space_to_json(const InputSpace& space) {
  Json inputs = Json::array();
  Json prot = Json::object();
  prot["name"] = space.protected_input.name;
  prot["role"] = "protected";
  prot["domain"] = domain_to_json(space.protected_input.domain);
  prot["dist"] = dist_to_json(space.protected_input.dist);
  inputs.push_back(std::move(prot));
  for (const auto& comp : space.unprotected) {
    Json item = Json::object();
    item["name"] = comp.name;
    item["role"] = "unprotected";
    item["domain"] = domain_to_json(comp.domain);
    item["dist"] = dist_to_json(comp.dist);
    inputs.push_back(std::move(item));
  }
  return Json{{"schema", 1}, {"inputs", inputs}};
}

CptDocument cpt_from_json(const Json& doc) {
  for (const char* field : {"groups", "u_points", "outcomes", "rows"}) {
    if (!doc.contains(field)) {
      fail(ErrorCode::Config, std::string("cpt document is missing '") + field + "'");
    }
  }
  std::vector<std::int64_t> groups = doc.at("groups").get<std::vector<std::int64_t>>();
  std::vector<std::vector<std::int64_t>> u_points =
      doc.at("u_points").get<std::vector<std::vector<std::int64_t>>>();
  std::vector<std::int64_t> outcomes = doc.at("outcomes").get<std::vector<std::int64_t>>();

  CptDocument out{OutcomeTable(groups, u_points, outcomes), {}, {}, {}};
  if (doc.contains("u_names")) {
    out.u_names = doc.at("u_names").get<std::vector<std::string>>();
  } else {
    for (size_t i = 0; i < (u_points.empty() ? 0 : u_points[0].size()); ++i) {
      out.u_names.push_back("u" + std::to_string(i));
    }
  }

  auto dist_from = [&](const Json& v, size_t n, const char* what) {
    std::vector<Rational> dist;
    if (v.is_string() && v.get<std::string>() == "uniform") {
      dist.assign(n, Rational(1) / Rational::from_int64(static_cast<std::int64_t>(n)));
      return dist;
    }
    if (v.is_object() && v.contains("weights")) {
      for (const auto& w : v.at("weights")) dist.push_back(rational_from_json(w, what));
      if (dist.size() != n) {
        fail(ErrorCode::Config, std::string(what) + ": expected " + std::to_string(n) +
                                    " weights, got " + std::to_string(dist.size()));
      }
      Rational sum(0);
      for (const auto& w : dist) sum += w;
      if (sum != Rational(1)) {
        fail(ErrorCode::Config, std::string(what) + " weights sum to " + sum.to_string());
      }
      return dist;
    }
    fail(ErrorCode::Config, std::string(what) + " must be \"uniform\" or {\"weights\": [...]}");
  };

  // g_dist may also be a pmf keyed by group value
  if (doc.contains("g_dist") && doc.at("g_dist").is_object() &&
      doc.at("g_dist").contains("pmf")) {
    std::map<std::int64_t, Rational> pmf;
    for (const auto& [key, value] : doc.at("g_dist").at("pmf").items()) {
      pmf[std::stoll(key)] = rational_from_json(value, "g_dist pmf");
    }
    Rational sum(0);
    for (std::int64_t g : groups) {
      auto it = pmf.find(g);
      Rational m = it == pmf.end() ? Rational(0) : it->second;
      sum += m;
      out.dist_g.push_back(m);
    }
    if (sum != Rational(1)) fail(ErrorCode::Config, "g_dist pmf sums to " + sum.to_string());
  } else {
    out.dist_g = dist_from(doc.contains("g_dist") ? doc.at("g_dist") : Json("uniform"),
                           groups.size(), "g_dist");
  }
  out.dist_u = dist_from(doc.contains("u_dist") ? doc.at("u_dist") : Json("uniform"),
                         u_points.size(), "u_dist");

  for (const auto& row : doc.at("rows")) {
    std::int64_t g = row.at("g").get<std::int64_t>();
    std::vector<std::int64_t> u = row.at("u").get<std::vector<std::int64_t>>();
    size_t gi = 0, ui = 0;
    bool found_g = false, found_u = false;
    for (size_t i = 0; i < groups.size(); ++i) {
      if (groups[i] == g) {
        gi = i;
        found_g = true;
      }
    }
    for (size_t i = 0; i < u_points.size(); ++i) {
      if (u_points[i] == u) {
        ui = i;
        found_u = true;
      }
    }
    if (!found_g || !found_u) {
      fail(ErrorCode::Config, "cpt row references an undeclared group or u point");
    }
    for (const auto& [key, value] : row.at("p").items()) {
      std::int64_t d = std::stoll(key);
      int di = out.table.outcome_index(d);
      if (di < 0) fail(ErrorCode::Config, "cpt row lists undeclared outcome " + key);
      out.table.set_prob(gi, ui, static_cast<size_t>(di),
                         rational_from_json(value, "row probabilities"));
    }
  }
  out.table.validate();
  return out;
}

dsl::ValidatedProgram load_program(const std::string& path,
                                   const std::map<std::string, std::int64_t>& defines) {
  dsl::SourceProgram src;
  src.text = read_file(path);
  src.origin = path;
  return dsl::typecheck(dsl::parse_program(src, defines));
}

CausalModel load_model(const std::string& path) {
  dsl::SourceProgram src;
  src.text = read_file(path);
  src.origin = path;
  return parse_model(src);
}

AnalysisConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Config, "config must be a JSON object");
  if (doc.contains("schema") && doc.at("schema").get<int>() != 1) {
    fail(ErrorCode::Config, "unsupported config schema version");
  }

  AnalysisConfig cfg;
  cfg.base_dir = base_dir;
  auto get_string = [&](const char* key, std::string& out) {
    if (doc.contains(key)) out = doc.at(key).get<std::string>();
  };
  get_string("analysis", cfg.analysis);
  get_string("program", cfg.program_path);
  get_string("model", cfg.model_path);
  get_string("restriction", cfg.restriction_path);
  get_string("condition", cfg.condition_path);
  get_string("cond", cfg.cond_path);
  get_string("backend", cfg.backend);
  get_string("format", cfg.format);
  get_string("tol", cfg.tol);
  get_string("emit_cnf", cfg.emit_cnf);
  get_string("corpus", cfg.corpus_dir);

  if (doc.contains("space")) {
    const Json& space = doc.at("space");
    if (space.is_string()) {
      cfg.space_origin = space.get<std::string>();
      cfg.space_json = Json::parse(read_file(cfg.resolve(cfg.space_origin)));
    } else {
      cfg.space_origin = "<inline>";
      cfg.space_json = space;
    }
  }
  if (doc.contains("cpt")) {
    const Json& cpt = doc.at("cpt");
    cfg.cpt_json = cpt.is_string() ? Json::parse(read_file(cfg.resolve(cpt.get<std::string>())))
                                   : cpt;
  }
  if (doc.contains("paths")) cfg.paths = doc.at("paths").get<std::vector<std::string>>();
  if (doc.contains("favorable")) cfg.favorable = doc.at("favorable").get<std::int64_t>();
  if (doc.contains("jobs")) cfg.jobs = doc.at("jobs").get<int>();
  if (doc.contains("no_timings")) cfg.no_timings = doc.at("no_timings").get<bool>();
  if (doc.contains("space_cap")) cfg.space_cap = doc.at("space_cap").get<std::int64_t>();
  if (doc.contains("conflict_budget")) {
    cfg.conflict_budget = doc.at("conflict_budget").get<std::int64_t>();
  }
  if (doc.contains("defines")) {
    for (const auto& [key, value] : doc.at("defines").items()) {
      cfg.defines[key] = value.get<std::int64_t>();
    }
  }
  return cfg;
}

} // namespace fairflow
