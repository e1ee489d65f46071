#include "ptoric/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>

#include "ptoric/io.hpp"

namespace ptoric::cli {

namespace {

using nlohmann::json;

/// Strict view over one JSON object: every key must be declared.
class ConfigObject {
public:
  ConfigObject(const json& j, std::string where, std::set<std::string> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidArgument(where_ + ": expected a JSON object");
    for (const auto& item : j_.items()) {
      if (!allowed.count(item.key())) {
        throw InvalidArgument(where_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const { return j_.at(key); }

  double number(const std::string& key, std::optional<double> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw InvalidArgument(where_ + ": missing key '" + key + "'");
    }
    if (!j_.at(key).is_number()) throw InvalidArgument(where_ + ": '" + key + "' must be a number");
    return j_.at(key).get<double>();
  }

  int integer(const std::string& key, std::optional<int> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw InvalidArgument(where_ + ": missing key '" + key + "'");
    }
    if (!j_.at(key).is_number_integer()) {
      throw InvalidArgument(where_ + ": '" + key + "' must be an integer");
    }
    return j_.at(key).get<int>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw InvalidArgument(where_ + ": '" + key + "' must be a boolean");
    return j_.at(key).get<bool>();
  }

  ConfigObject child(const std::string& key, std::set<std::string> allowed) const {
    static const json empty = json::object();
    return ConfigObject(has(key) ? j_.at(key) : empty, where_ + "." + key, std::move(allowed));
  }

private:
  const json& j_;
  std::string where_;
};

int read_k(const ConfigObject& cfg, std::optional<int> fallback = {}) {
  const int k = cfg.integer("k", fallback);
  if (k < 1) throw InvalidArgument("config: k must be positive");
  return k;
}

LevelValues read_levels(const ConfigObject& cfg, int k) {
  if (!cfg.has("levels")) return LevelValues::zeros(k);
  const json& lv = cfg.raw("levels");
  if (!lv.is_array()) throw InvalidArgument("config: 'levels' must be an array");
  LevelValues levels;
  for (const auto& x : lv) {
    if (!x.is_number()) throw InvalidArgument("config: level values must be numbers");
    levels.c.push_back(x.get<double>());
  }
  if (static_cast<int>(levels.size()) != k) {
    throw InvalidArgument("config: expected " + std::to_string(k) + " level values");
  }
  return levels;
}

TorusSpec read_spec(const ConfigObject& cfg) {
  const int k = read_k(cfg);
  if (!cfg.has("loop")) throw InvalidArgument("config: missing key 'loop'");
  TorusSpec spec{PseudotoricStructure(k), loop_from_json(cfg.raw("loop")), read_levels(cfg, k)};
  spec.validate();
  return spec;
}

TorusResolution read_resolution(const ConfigObject& cfg, int k, int n_t, int n_phi) {
  const ConfigObject res = cfg.child("resolution", {"n_t", "n_phi"});
  TorusResolution out = TorusResolution::uniform(k, res.integer("n_t", n_t), n_phi);
  if (res.has("n_phi")) {
    const json& v = res.raw("n_phi");
    if (v.is_number_integer()) {
      out.n_phi.assign(static_cast<std::size_t>(k), v.get<int>());
    } else if (v.is_array() && static_cast<int>(v.size()) == k) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (!v[j].is_number_integer()) throw InvalidArgument("config: n_phi entries must be integers");
        out.n_phi[j] = v[j].get<int>();
      }
    } else {
      throw InvalidArgument("config: n_phi must be an integer or an array of k integers");
    }
  }
  out.validate(k);
  return out;
}

FlowParams read_flow(const ConfigObject& cfg, const FlowParams& defaults) {
  const ConfigObject flow = cfg.child("flow", {"step_size", "max_time", "tolerance"});
  FlowParams p{flow.number("step_size", defaults.step_size), flow.number("max_time", defaults.max_time),
               flow.number("tolerance", defaults.tolerance)};
  p.validate();
  return p;
}

std::uint64_t read_seed(const ConfigObject& cfg) {
  if (!cfg.has("seed")) return 0;
  const json& s = cfg.raw("seed");
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
    throw InvalidArgument("config: 'seed' must be a non-negative integer");
  }
  return s.get<std::uint64_t>();
}

void maybe_plot(bool plots, const std::filesystem::path& dir, const std::string& name, const Loop& loop,
                const std::vector<Complex>& extra = {}) {
  if (plots) write_file_atomic(dir / name, loop_svg(loop, extra));
}

void write_report(const std::filesystem::path& dir, const std::string& name, const json& report) {
  write_file_atomic(dir / name, report.dump(2) + "\n");
}

CommandResult cmd_verify_structure(const json& config, const std::filesystem::path& dir) {
  const ConfigObject cfg(config, "config", {"command", "k", "n_points", "seed", "tolerances", "flow"});
  const int k = read_k(cfg, 3);
  const int n_points = cfg.integer("n_points", 100);
  const std::uint64_t seed = read_seed(cfg);
  const ConfigObject tol_cfg = cfg.child("tolerances", {"commutator", "vertical", "fiber_drift"});
  VerificationTolerances tol{tol_cfg.number("commutator", 1e-10), tol_cfg.number("vertical", 1e-10),
                             tol_cfg.number("fiber_drift", 1e-8)};
  const FlowParams flow = read_flow(cfg, {1e-2, 1.0, 1e-10});
  const VerificationReport report = verify_structure(PseudotoricStructure(k), n_points, seed, tol, flow);

  json out = {{"command", "verify-structure"}, {"seed", seed}, {"report", to_json(report)}};
  if (!report.pass) {
    out["diagnostic"] = "at least one statistic exceeds its tolerance";
  }
  write_report(dir, "report.json", out);
  return {report.pass ? kExitPass : kExitNumericalFailure, out};
}

CommandResult cmd_build_torus(const json& config, const std::filesystem::path& dir, bool plots) {
  const ConfigObject cfg(config, "config", {"command", "k", "levels", "loop", "resolution", "seed"});
  const TorusSpec spec = read_spec(cfg);
  const TorusResolution res = read_resolution(cfg, spec.k(), 32, 32);
  const std::uint64_t seed = read_seed(cfg);
  const TorusSample sample = build_torus(spec, res);

  json out = {{"command", "build-torus"}, {"seed", seed}, {"metadata", torus_metadata(sample)}};
  write_file_atomic(dir / "torus.csv", torus_csv(sample));
  write_report(dir, "torus.json", out);
  maybe_plot(plots, dir, "loop.svg", spec.loop);
  return {kExitPass, out};
}

CommandResult cmd_verify_lagrangian(const json& config, const std::filesystem::path& dir, bool plots) {
  const ConfigObject cfg(config, "config",
                         {"command", "k", "levels", "loop", "resolution", "tolerances",
                          "refinement_check", "seed"});
  const TorusSpec spec = read_spec(cfg);
  const TorusResolution res = read_resolution(cfg, spec.k(), 32, 32);
  const double tol = cfg.child("tolerances", {"lagrangian"}).number("lagrangian", 1e-6);
  const bool refine = cfg.boolean("refinement_check", true);
  const std::uint64_t seed = read_seed(cfg);

  json out = {{"command", "verify-lagrangian"}, {"seed", seed}, {"spec", to_json(spec)}, {"tolerance", tol}};
  bool pass = false;
  if (refine) {
    const RefinementCheck check = lagrangian_refinement(spec, res);
    out["defect"] = to_json(check.coarse);
    out["refinement"] = to_json(check);
    pass = check.coarse.max_defect <= tol && check.stable;
  } else {
    const LagrangianDefect defect = lagrangian_defect(spec, res);
    out["defect"] = to_json(defect);
    pass = defect.max_defect <= tol;
  }
  out["pass"] = pass;
  write_report(dir, "lagrangian.json", out);
  maybe_plot(plots, dir, "loop.svg", spec.loop);
  return {pass ? kExitPass : kExitNumericalFailure, out};
}

CommandResult cmd_classify_loop(const json& config, const std::filesystem::path& dir, bool plots) {
  const ConfigObject cfg(config, "config", {"command", "loop", "seed"});
  if (!cfg.has("loop")) throw InvalidArgument("config: missing key 'loop'");
  const Loop loop = loop_from_json(cfg.raw("loop"));
  const std::uint64_t seed = read_seed(cfg);
  const int w = winding_number(loop);
  json out = {{"command", "classify-loop"},
              {"seed", seed},
              {"loop", loop.description()},
              {"winding", w},
              {"type", to_string(classify_type(loop))},
              {"signed_area", enclosed_area(loop)},
              {"min_modulus", min_modulus(loop)},
              {"max_modulus", max_modulus(loop)}};
  write_report(dir, "loop.json", out);
  maybe_plot(plots, dir, "loop.svg", loop);
  return {kExitPass, out};
}

CommandResult cmd_displace(const json& config, const std::filesystem::path& dir, bool plots) {
  const ConfigObject cfg(config, "config",
                         {"command", "k", "levels", "loop", "resolution", "flow", "displacement", "seed"});
  const TorusSpec spec = read_spec(cfg);
  const TorusResolution res = read_resolution(cfg, spec.k(), 32, spec.k() == 1 ? 16 : 8);
  const FlowParams flow = read_flow(cfg, {1e-2, 10.0, 1e-8});
  const ConfigObject dcfg = cfg.child(
      "displacement", {"strength", "n_dirs", "delta_fraction", "delta_prime_fraction", "target_margin",
                       "chunk_time", "moment_tolerance", "refinement_check", "export_clouds"});
  const std::uint64_t seed = read_seed(cfg);

  const AvoidingRay ray = require_avoiding_ray(spec.loop, dcfg.integer("n_dirs", 256));
  const CutProfile profile =
      make_cut_profile(ray, dcfg.number("strength", 1.0), dcfg.number("delta_fraction", 0.25),
                       dcfg.number("delta_prime_fraction", 0.5));
  DisplaceOptions options;
  options.resolution = res;
  options.target_margin = dcfg.number("target_margin", 0.1);
  options.chunk_time = dcfg.number("chunk_time", 0.05);
  options.moment_tolerance = dcfg.number("moment_tolerance", 1e-6);
  const bool export_clouds = dcfg.boolean("export_clouds", false);
  options.keep_clouds = export_clouds || plots;

  const DisplacementReport report = dcfg.boolean("refinement_check", true)
                                        ? displace_with_refinement(spec, profile, flow, options)
                                        : displace(spec, profile, flow, options);
  json out = {{"command", "displace"},
              {"seed", seed},
              {"spec", to_json(spec)},
              {"profile", to_json(profile)},
              {"report", to_json(report)}};
  write_report(dir, "displacement.json", out);

  if (export_clouds) {
    const TorusSample sample = build_torus(spec, res);
    write_file_atomic(dir / "original.csv", cloud_csv(sample, report.original, 0.0));
    write_file_atomic(dir / "flowed.csv", cloud_csv(sample, report.flowed, report.time_elapsed));
  }
  if (plots) {
    std::vector<Complex> projected;
    for (const PhasePoint& p : report.flowed) projected.push_back(psi_eval(p));
    maybe_plot(plots, dir, "displacement.svg", spec.loop, projected);
  }
  return {report.certificate ? kExitPass : kExitCertificateFalse, out};
}

CommandResult cmd_equivalence(const json& config, const std::filesystem::path& dir) {
  const ConfigObject cfg(config, "config", {"command", "specs", "seed"});
  if (!cfg.has("specs") || !cfg.raw("specs").is_array() || cfg.raw("specs").size() != 2) {
    throw InvalidArgument("config: 'specs' must be an array of two torus specs");
  }
  const std::uint64_t seed = read_seed(cfg);
  std::vector<TorusSpec> specs;
  for (std::size_t i = 0; i < 2; ++i) {
    const ConfigObject s(cfg.raw("specs")[i], "config.specs[" + std::to_string(i) + "]",
                         {"k", "levels", "loop"});
    specs.push_back(read_spec(s));
  }
  const EquivalenceVerdict verdict = decide_equivalence(specs[0], specs[1]);
  json out = {{"command", "equivalence"},
              {"seed", seed},
              {"specs", {to_json(specs[0]), to_json(specs[1])}},
              {"verdict", to_json(verdict)}};
  write_report(dir, "equivalence.json", out);
  return {kExitPass, out};
}

}  // namespace

CommandResult execute(const std::string& command, nlohmann::json config,
                      const std::filesystem::path& out_dir, bool plots) {
  if (!config.is_object()) throw InvalidArgument("config: top level must be a JSON object");
  if (config.contains("command") &&
      (!config.at("command").is_string() || config.at("command").get<std::string>() != command)) {
    throw InvalidArgument("config: 'command' does not match the requested command " + command);
  }
  std::filesystem::create_directories(out_dir);
  if (command == "verify-structure") return cmd_verify_structure(config, out_dir);
  if (command == "build-torus") return cmd_build_torus(config, out_dir, plots);
  if (command == "verify-lagrangian") return cmd_verify_lagrangian(config, out_dir, plots);
  if (command == "classify-loop") return cmd_classify_loop(config, out_dir, plots);
  if (command == "displace") return cmd_displace(config, out_dir, plots);
  if (command == "equivalence") return cmd_equivalence(config, out_dir);
  throw InvalidArgument("unknown command '" + command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for loop-parameterized Lagrangian tori in C^{k+1}", "ptlab"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool plots = false;
  static const std::map<std::string, std::string> help = {
      {"verify-structure", "check commutation and fiber preservation of the moment functions"},
      {"build-torus", "sample a torus from a loop and level values (CSV + metadata)"},
      {"verify-lagrangian", "measure the Lagrangian defect of a sampled torus"},
      {"classify-loop", "winding number, signed area and type of a base loop"},
      {"displace", "flow a Chekanov-type torus off itself and report a certificate"},
      {"equivalence", "compare two tori by loop type and enclosed area"}};
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--plots", plots, "emit static SVG plots");
  }

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    json config;
    {
      std::ifstream in(config_path);
      if (!in) throw InvalidArgument("cannot read config file " + config_path);
      try {
        config = json::parse(in);
      } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON config: ") + e.what());
      }
    }
    if (seed) {
      if (!config.is_object()) throw InvalidArgument("config: top level must be a JSON object");
      config["seed"] = *seed;
    }
    const CommandResult result = execute(command, std::move(config), out_dir, plots);
    out << result.report.dump(2) << '\n';
    if (result.exit_code == kExitNumericalFailure) {
      err << command << ": verification failed (see report)\n";
    } else if (result.exit_code == kExitCertificateFalse) {
      err << command << ": completed without a displacement certificate\n";
    }
    return result.exit_code;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace ptoric::cli
