// rank1: batch experiments on rank-one constructions.
//
//   rank1 geometry --family utv1 --j 5
//   rank1 limits verify --family utv1 --seq h_j --poly "1/2*T^0" --j 3..8
//   rank1 run limits --family utv1 --j 3..8
//   rank1 run --config experiment.json --out report.csv --format csv
//
// Exit status: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 64 usage or config error,
// 70 internal error.

#include "rank1/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rank1;

namespace {

constexpr int kInternalExit = 70;

struct Flags {
  std::vector<std::string> families;
  std::string config, out, format;
  std::map<std::string, std::string> values;  // flag name -> raw text
  bool exhaustive = false;
  std::vector<int> only;
};

struct Leaf {
  CLI::App* app = nullptr;
  std::string experiment;  // empty: taken from the positional or the config
  json fixed = json::object();
};

// Flags each experiment understands, beyond the common ones.
const std::map<std::string, std::vector<std::string>>& experiment_flags() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"geometry", {"j", "j-range"}},
      {"measure", {"J"}},
      {"oracle", {"a", "b", "n", "k-range", "J"}},
      {"limits", {"seq", "poly", "a", "b", "j", "j-range", "tol"}},
      {"scan", {"a", "b", "j", "j-range", "step", "samples", "exhaustive"}},
      {"eq4", {"N", "p", "n", "a", "b", "stages", "sigma-cutoff", "tol"}},
      {"joinings", {"m", "j", "j-range", "tol", "eps"}},
      {"products", {"m", "n", "a", "a-prime", "k-range", "samples", "ratio-target", "ratio-stages"}},
      {"spectral", {"a", "n", "k-range", "N", "M"}},
      {"acceptance", {"only"}},
  };
  return m;
}

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> h{
      {"j", "stage, or stage range a..b"},
      {"j-range", "stage range a..b"},
      {"J", "truncation or summation depth"},
      {"a", "level set \"stage=J; levels=0,1\""},
      {"b", "level set \"stage=J; levels=0,1\""},
      {"a-prime", "level set of the right factor"},
      {"n", "shift, power, or comma list of shifts (spectral)"},
      {"k-range", "range lo..hi; endpoints may use h_j, e.g. h_4+1..h_4+2000"},
      {"tol", "tolerance as a rational p/q"},
      {"eps", "margin tolerance as a rational p/q"},
      {"seq", "candidate sequence, e.g. \"h_k + h_{k-1}\""},
      {"poly", "operator polynomial, e.g. \"1/2*T^0\""},
      {"step", "window step (default h_{j-1})"},
      {"samples", "sample count"},
      {"exhaustive", "scan whole dead zones when small enough"},
      {"N", "r_j - 1 for eq4; Fejer order for spectral density"},
      {"M", "grid size for spectral density"},
      {"p", "target power p"},
      {"m", "power of the left factor, or the joining shift"},
      {"stages", "comma list of stages"},
      {"sigma-cutoff", "largest stage searched for sigma(j) = |p|"},
      {"ratio-target", "height ratio target a/b"},
      {"ratio-stages", "stages checked for the ratio"},
      {"only", "criterion ids"},
  };
  return h;
}

void add_common(CLI::App* app, Flags& f, bool families) {
  if (families) app->add_option("--family", f.families, "toy, utv1, thm2(N), scaled(p/q); twice for products");
  app->add_option("--config", f.config, "JSON experiment config");
  app->add_option("--max-stage", f.values["max-stage"], "resolution cap, overrides RANK1_MAX_STAGE");
  app->add_option("--out", f.out, "output path (written atomically); stdout when absent");
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_experiment_flags(CLI::App* app, Flags& f, const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) continue;
    if (name == "exhaustive") {
      app->add_flag("--exhaustive", f.exhaustive, flag_help().at(name));
    } else if (name == "only") {
      app->add_option("--only", f.only, flag_help().at(name));
    } else {
      app->add_option("--" + name, f.values[name], flag_help().at(name));
    }
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Translates flags into params of `experiment`.
void apply_flags(const std::string& experiment, const Flags& f, json& params) {
  auto given = [&](const std::string& k) {
    auto it = f.values.find(k);
    return it != f.values.end() && !it->second.empty();
  };
  auto val = [&](const std::string& k) { return f.values.at(k); };
  const std::set<std::string> plain{"a", "b", "seq", "poly", "step", "samples", "N", "M", "p", "m", "J", "eps",
                                    "sigma-cutoff", "ratio-target", "ratio-stages"};
  for (const auto& k : plain) {
    if (!given(k)) continue;
    std::string key = k;
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    params[key] = val(k);
  }
  if (given("a-prime")) params["a_prime"] = val("a-prime");
  if (given("max-stage")) params["max_stage"] = val("max-stage");
  if (given("j")) params[experiment == "geometry" ? "j" : "j_range"] = val("j");
  if (given("j-range")) params["j_range"] = val("j-range");
  if (given("tol")) params[experiment == "joinings" ? "eps" : "tol"] = val("tol");
  if (given("k-range")) params[experiment == "spectral" ? "n_range" : "k_range"] = val("k-range");
  if (given("n")) {
    if (experiment == "spectral") {
      json list = json::array();
      for (const auto& x : split_list(val("n"))) list.push_back(x);
      params["n_list"] = list;
    } else {
      params["n"] = val("n");
    }
  }
  if (given("stages")) {
    json list = json::array();
    for (const auto& x : split_list(val("stages"))) list.push_back(x);
    params["stages"] = list;
  }
  if (f.exhaustive) params["exhaustive"] = true;
  if (!f.only.empty()) params["only"] = f.only;
}

int run(const Leaf& leaf, const std::string& positional, const Flags& f) {
  json doc = json::object();
  if (!f.config.empty()) doc = read_json_file(f.config);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  std::string experiment = leaf.experiment.empty() ? positional : leaf.experiment;
  if (experiment.empty()) {
    if (!doc.contains("experiment")) throw ConfigError("name an experiment or pass --config");
  } else {
    if (doc.contains("experiment") && doc["experiment"] != experiment)
      throw ConfigError("config describes '" + doc["experiment"].get<std::string>() + "', not '" + experiment + "'");
    doc["experiment"] = experiment;
  }
  if (!doc["experiment"].is_string()) throw ConfigError("\"experiment\" must be a string");
  experiment = doc["experiment"].get<std::string>();
  if (!experiment_flags().count(experiment)) throw ConfigError("unknown experiment '" + experiment + "'");

  if (!f.families.empty()) {
    doc.erase("construction");
    doc.erase("constructions");
    if (f.families.size() == 1) {
      doc["construction"] = {{"family", f.families[0]}};
    } else {
      json arr = json::array();
      for (const auto& name : f.families) arr.push_back({{"family", name}});
      doc["constructions"] = arr;
    }
  }
  json params = doc.contains("params") ? doc["params"] : json::object();
  for (const auto& [k, v] : leaf.fixed.items()) params[k] = v;
  apply_flags(experiment, f, params);
  doc["params"] = params;
  if (!f.format.empty()) doc["output"]["format"] = f.format;
  if (!f.out.empty()) doc["output"]["path"] = f.out;

  auto cfg = ExperimentConfig::from_json(doc);
  auto report = run_experiment(cfg);
  auto text = render(report, cfg);
  if (cfg.out_path.empty()) {
    std::cout << text << std::flush;
  } else {
    write_atomically(cfg.out_path, text);
    std::cout << to_string(report.verdict) << "  " << cfg.experiment << " -> " << cfg.out_path << '\n';
  }
  return exit_code(report.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments on rank-one transformations", "rank1"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  Flags f;
  std::vector<Leaf> leaves;
  std::string positional;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& experiment,
                  json fixed = json::object()) {
    auto* sub = parent->add_subcommand(name, desc);
    add_common(sub, f, experiment != "acceptance");
    add_experiment_flags(sub, f, experiment_flags().at(experiment));
    leaves.push_back({sub, experiment, std::move(fixed)});
  };
  auto group = [&](const std::string& name, const std::string& desc) {
    auto* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  };

  leaf(&app, "geometry", "stage heights, widths, spacers and offsets", "geometry");
  leaf(&app, "measure", "partial sums of the measure series and the spacer growth check", "measure");
  leaf(&app, "oracle", "interval-oracle values against the tower calculus", "oracle");
  auto* lim = group("limits", "weak-limit checks");
  leaf(lim, "verify", "verify a candidate limit along a sequence", "limits");
  leaf(lim, "scan", "window and dead-zone scan", "scan");
  leaf(lim, "eq4", "limit of T^{-n h_j} along stages with sigma(j) = |p|", "eq4");
  auto* joi = group("joinings", "off-diagonal joinings");
  leaf(joi, "witness", "witness shifts k(j) for Delta^m", "joinings");
  auto* pro = group("products", "product systems");
  leaf(pro, "scan", "rectangle returns of T^m x T^n", "products");
  auto* spe = group("spectral", "correlation and spectral indicators");
  leaf(spe, "corr", "correlation coefficients c(n)", "spectral", {{"mode", "corr"}});
  leaf(spe, "density", "Fejer density estimate", "spectral", {{"mode", "density"}});
  leaf(spe, "suspend", "Gaussian/Poisson suspension correlations", "spectral", {{"mode", "suspend"}});
  leaf(&app, "acceptance", "the acceptance suite", "acceptance");

  auto* runner = app.add_subcommand("run", "run a named experiment or a config file");
  runner->add_option("experiment", positional, "experiment name")
      ->check(CLI::IsMember(std::vector<std::string>(experiment_names())));
  add_common(runner, f, true);
  {
    std::vector<std::string> all;
    for (const auto& [_, names] : experiment_flags()) all.insert(all.end(), names.begin(), names.end());
    add_experiment_flags(runner, f, all);
  }
  leaves.push_back({runner, "", json::object()});

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  const Leaf* chosen = nullptr;
  for (const auto& l : leaves)
    if (l.app->parsed()) chosen = &l;
  try {
    return run(*chosen, positional, f);
  } catch (const std::invalid_argument& e) {
    std::cerr << "rank1: " << e.what() << '\n';
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "rank1: error: " << e.what() << '\n';
    return kInternalExit;
  }
}
