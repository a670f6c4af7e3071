#include "rank1/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rank1 {

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

BigInt big_from(const json& v, const std::string& what) {
  try {
    if (v.is_number_integer()) return BigInt(v.get<long>());
    if (v.is_string()) return parse_bigint(v.get<std::string>());
  } catch (const std::exception&) {
  }
  throw ConfigError(what + " must be an integer or a decimal string");
}

Rational rational_from(const json& v, const std::string& what) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::exception&) {
  }
  throw ConfigError(what + " must be an integer or a \"p/q\" string");
}

const std::map<std::string, SpacerKind>& spacer_kinds() {
  static const std::map<std::string, SpacerKind> kinds{
      {"zero", SpacerKind::zero},         {"constant", SpacerKind::constant},   {"c_times_j", SpacerKind::c_times_j},
      {"c_times_h", SpacerKind::c_times_h}, {"j_times_h", SpacerKind::j_times_h}, {"sigma", SpacerKind::sigma},
      {"scaled_target", SpacerKind::scaled_target}};
  return kinds;
}

std::string spacer_name(SpacerKind k) {
  for (const auto& [name, kind] : spacer_kinds())
    if (kind == k) return name;
  return "?";
}

SpacerRule spacer_from(const json& v) {
  std::string name;
  if (v.is_string()) {
    name = v.get<std::string>();
  } else if (v.is_object()) {
    reject_unknown(v, {"rule", "c", "a"}, "spacer rule");
    if (!v.contains("rule") || !v["rule"].is_string()) throw ConfigError("spacer rule needs a \"rule\" name");
    name = v["rule"].get<std::string>();
  } else {
    throw ConfigError("spacer rules are names or objects");
  }
  auto it = spacer_kinds().find(name);
  if (it == spacer_kinds().end()) throw ConfigError("unknown spacer rule '" + name + "'");
  SpacerRule r;
  r.kind = it->second;
  const bool needs_c = r.kind == SpacerKind::constant || r.kind == SpacerKind::c_times_j || r.kind == SpacerKind::c_times_h;
  if (needs_c) {
    if (!v.is_object() || !v.contains("c")) throw ConfigError("spacer rule '" + name + "' needs \"c\"");
    r.c = big_from(v["c"], "spacer c");
  }
  if (r.kind == SpacerKind::scaled_target) {
    if (!v.is_object() || !v.contains("a")) throw ConfigError("spacer rule 'scaled_target' needs \"a\"");
    r.a = rational_from(v["a"], "spacer a");
  }
  return r;
}

json spacer_to(const SpacerRule& r) {
  switch (r.kind) {
    case SpacerKind::constant:
    case SpacerKind::c_times_j:
    case SpacerKind::c_times_h:
      return {{"rule", spacer_name(r.kind)}, {"c", to_string(r.c)}};
    case SpacerKind::scaled_target:
      return {{"rule", spacer_name(r.kind)}, {"a", to_string(r.a)}};
    default:
      return spacer_name(r.kind);
  }
}

const std::map<std::string, std::set<std::string>>& experiment_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"geometry", {"j", "j_range"}},
      {"measure", {"J"}},
      {"oracle", {"a", "b", "n", "k_range", "J"}},
      {"limits", {"seq", "poly", "a", "b", "j_range", "tol"}},
      {"scan", {"a", "b", "j_range", "step", "samples", "exhaustive"}},
      {"eq4", {"N", "p", "n", "a", "b", "stages", "sigma_cutoff", "tol"}},
      {"joinings", {"m", "grid", "j_range", "eps"}},
      {"products", {"m", "n", "a", "a_prime", "k_range", "samples", "ratio_target", "ratio_stages"}},
      {"spectral", {"mode", "a", "n_list", "n_range", "N", "M"}},
      {"acceptance", {"only"}},
  };
  return keys;
}

}  // namespace

ConstructionParams construction_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("construction config must be a JSON object");
  if (j.contains("family")) {
    reject_unknown(j, {"family"}, "construction config");
    if (!j["family"].is_string()) throw ConfigError("\"family\" must be a string");
    try {
      return family::by_name(j["family"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  reject_unknown(j, {"name", "h1", "base_width", "stages"}, "construction config");
  ConstructionParams p;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("\"name\" must be a string");
    p.name = j["name"].get<std::string>();
  }
  if (!j.contains("h1")) throw ConfigError("construction config needs \"h1\"");
  p.h1 = big_from(j["h1"], "h1");
  if (j.contains("base_width")) p.base_width = rational_from(j["base_width"], "base_width");
  if (!j.contains("stages")) throw ConfigError("construction config needs \"stages\"");
  const json& st = j["stages"];
  reject_unknown(st, {"r", "r_slope", "spacers"}, "stages");
  if (!st.contains("r")) throw ConfigError("stages need \"r\"");
  p.cuts.base = to_ll(big_from(st["r"], "r"));
  if (st.contains("r_slope")) p.cuts.slope = to_ll(big_from(st["r_slope"], "r_slope"));
  if (st.contains("spacers")) {
    if (!st["spacers"].is_array()) throw ConfigError("\"spacers\" must be an array");
    for (const auto& s : st["spacers"]) p.spacers.push_back(spacer_from(s));
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

json construction_to_json(const ConstructionParams& p) {
  json stages = {{"r", p.cuts.base}};
  if (p.cuts.slope != 0) stages["r_slope"] = p.cuts.slope;
  json spacers = json::array();
  for (const auto& s : p.spacers) spacers.push_back(spacer_to(s));
  stages["spacers"] = spacers;
  return {{"name", p.name}, {"h1", to_string(p.h1)}, {"base_width", to_string(p.base_width)}, {"stages", stages}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j, {"experiment", "construction", "constructions", "params", "output"}, "experiment config");
  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string()) throw ConfigError("config needs \"experiment\"");
  cfg.experiment = j["experiment"].get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  if (j.contains("construction") && j.contains("constructions"))
    throw ConfigError("give either \"construction\" or \"constructions\"");
  if (j.contains("construction")) cfg.constructions.push_back(construction_from_json(j["construction"]));
  if (j.contains("constructions")) {
    if (!j["constructions"].is_array() || j["constructions"].empty())
      throw ConfigError("\"constructions\" must be a non-empty array");
    for (const auto& c : j["constructions"]) cfg.constructions.push_back(construction_from_json(c));
  }
  if (cfg.constructions.empty() && cfg.experiment != "acceptance")
    throw ConfigError("experiment '" + cfg.experiment + "' needs a construction");

  if (j.contains("params")) {
    std::set<std::string> allowed = experiment_keys().at(cfg.experiment);
    allowed.insert("max_stage");
    reject_unknown(j["params"], allowed, "params of '" + cfg.experiment + "'");
    cfg.params = j["params"];
  }
  if (j.contains("output")) {
    reject_unknown(j["output"], {"path", "format"}, "output");
    const json& o = j["output"];
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output path must be a string");
      cfg.out_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output format must be a string");
      cfg.format = o["format"].get<std::string>();
    }
  }
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be csv or json");
  return cfg;
}

json ExperimentConfig::to_json() const {
  json j = {{"experiment", experiment}};
  if (constructions.size() == 1) {
    j["construction"] = construction_to_json(constructions.front());
  } else if (!constructions.empty()) {
    json arr = json::array();
    for (const auto& c : constructions) arr.push_back(construction_to_json(c));
    j["constructions"] = arr;
  }
  j["params"] = params;
  json out = {{"format", format}};
  if (!out_path.empty()) out["path"] = out_path;
  j["output"] = out;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace rank1
