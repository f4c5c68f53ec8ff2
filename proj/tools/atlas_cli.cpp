// Command-line front end: behavior maps, equivalence checks, perturbation
// sweeps, intervention paths, and composite experiments.
//
// Exit codes: 0 success, 1 invalid arguments or validation failure,
// 2 pipeline failure (non-convergence, wander on a map edge),
// 3 non-equivalence (equiv verdict, sweep verdict false).

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "atlas/atlas.hpp"
#include "atlas/behavior.hpp"
#include "atlas/errors.hpp"
#include "atlas/intervention.hpp"
#include "atlas/io.hpp"
#include "atlas/perception.hpp"
#include "atlas/sweep.hpp"
#include "atlas/world.hpp"

namespace {

using nlohmann::json;

// ==== flag plumbing =========================================================

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = {
      "width",        "height",      "length",           "start-index", "wall-span",
      "reward-big",   "reward-small", "reward-ratio",    "reward-goal", "reward-cliff",
      "reward-wall",  "reward-step", "reward-end",       "reward-disengage",
      "reward-left",  "reward-right", "reward-dead",     "reward-donut",
      "reward-noodle", "reward-vegan", "p-c",            "p-f"};
  return keys;
}

struct CommonOpts {
  std::string world;
  std::string kind;  // compose target
  int res = 101;
  std::string gamma_range;
  std::string p_range;
  double tol = 1e-10;
  std::string out;
  std::string svg;
  std::string palette;
  std::string config;
  std::string preset = "paper-b";
  long seed = 0;

  std::vector<double> param_values;
  std::vector<CLI::Option*> param_opts;
  CLI::Option* world_opt = nullptr;
  CLI::Option* res_opt = nullptr;
  CLI::Option* gamma_range_opt = nullptr;
  CLI::Option* p_range_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* svg_opt = nullptr;
  CLI::Option* palette_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
};

void add_world_flags(CLI::App* cmd, CommonOpts& o, bool world_required) {
  o.world_opt = cmd->add_option("--world", o.world, "world kind (e.g. big-small, cliff)");
  if (world_required) o.world_opt->required();
  const auto& keys = param_keys();
  o.param_values.assign(keys.size(), 0.0);
  o.param_opts.assign(keys.size(), nullptr);
  for (std::size_t i = 0; i < keys.size(); ++i)
    o.param_opts[i] =
        cmd->add_option("--" + keys[i], o.param_values[i], "world parameter " + keys[i]);
  cmd->add_option("--seed", o.seed, "reserved; the pipeline is deterministic");
}

void add_grid_flags(CLI::App* cmd, CommonOpts& o, int default_res) {
  o.res = default_res;
  o.res_opt = cmd->add_option("--res", o.res, "grid resolution per axis")
                  ->check(CLI::Range(3, 4096));
  o.gamma_range_opt =
      cmd->add_option("--gamma-range", o.gamma_range, "discount axis as lo:hi");
  o.p_range_opt = cmd->add_option("--p-range", o.p_range, "confidence axis as lo:hi");
  o.tol_opt = cmd->add_option("--tol", o.tol, "value-iteration tolerance");
}

void add_output_flags(CLI::App* cmd, CommonOpts& o, bool with_svg) {
  o.out_opt = cmd->add_option("--out", o.out, "output file (default: stdout)");
  if (with_svg) {
    o.svg_opt = cmd->add_option("--svg", o.svg, "also render the map to this SVG file");
    o.palette_opt =
        cmd->add_option("--palette", o.palette, "comma-separated fill colors for the SVG");
  }
  cmd->add_option("--config", o.config, "JSON config file; explicit flags take precedence");
}

// Config files mirror the flag namespace: {"world": "cliff", "res": 51, ...}.
// A value from the file is used only when the flag was not given on the line.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j;
  try {
    j = json::parse(atlas::read_text_file(path));
  } catch (const json::exception& e) {
    throw atlas::ValidationError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw atlas::ValidationError("config " + path + ": expected an object");
  return j;
}

double config_number(const json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  throw atlas::ValidationError("config key " + key + ": expected a number");
}

void apply_config(CommonOpts& o, const json& cfg) {
  auto use = [&](const char* key, CLI::Option* opt) {
    return cfg.contains(key) && (opt == nullptr || opt->count() == 0);
  };
  if (use("world", o.world_opt)) {
    if (!cfg["world"].is_string())
      throw atlas::ValidationError("config key world: expected a string");
    o.world = cfg["world"].get<std::string>();
  }
  if (use("res", o.res_opt)) o.res = static_cast<int>(config_number(cfg["res"], "res"));
  if (use("gamma-range", o.gamma_range_opt)) {
    if (!cfg["gamma-range"].is_string())
      throw atlas::ValidationError("config key gamma-range: expected a lo:hi string");
    o.gamma_range = cfg["gamma-range"].get<std::string>();
  }
  if (use("p-range", o.p_range_opt)) {
    if (!cfg["p-range"].is_string())
      throw atlas::ValidationError("config key p-range: expected a lo:hi string");
    o.p_range = cfg["p-range"].get<std::string>();
  }
  if (use("tol", o.tol_opt)) o.tol = config_number(cfg["tol"], "tol");
  if (use("out", o.out_opt)) o.out = cfg["out"].get<std::string>();
  if (use("svg", o.svg_opt)) o.svg = cfg["svg"].get<std::string>();
  if (use("palette", o.palette_opt)) o.palette = cfg["palette"].get<std::string>();
  if (use("preset", o.preset_opt)) o.preset = cfg["preset"].get<std::string>();
}

// ==== parsing helpers =======================================================

double parse_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw atlas::ValidationError(what + ": malformed number: " + text);
  return v;
}

std::pair<double, double> parse_pair(const std::string& text, char sep,
                                     const std::string& what) {
  const auto pos = text.find(sep);
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size())
    throw atlas::ValidationError(what + ": expected two values separated by '" +
                                 std::string(1, sep) + "', got: " + text);
  return {parse_number(text.substr(0, pos), what), parse_number(text.substr(pos + 1), what)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string::size_type begin = 0;
  while (begin <= text.size()) {
    const auto end = text.find(',', begin);
    if (end == std::string::npos) {
      items.push_back(text.substr(begin));
      break;
    }
    items.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return items;
}

// ==== assembling pipeline inputs ===========================================

atlas::WorldParams gather_params(atlas::WorldKind kind, const CommonOpts& o,
                                 const json& cfg) {
  atlas::WorldParams params = atlas::default_params(kind);
  const auto& keys = param_keys();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (o.param_opts[i] != nullptr && o.param_opts[i]->count() > 0) {
      atlas::set_param(params, keys[i], o.param_values[i]);
    } else if (cfg.contains(keys[i])) {
      atlas::set_param(params, keys[i], config_number(cfg[keys[i]], keys[i]));
    }
  }
  return params;
}

atlas::World build_world(const std::string& kind_name, const CommonOpts& o, const json& cfg) {
  const atlas::WorldKind kind = atlas::world_kind_from_string(kind_name);
  return atlas::make_world(kind, gather_params(kind, o, cfg));
}

atlas::GridSpec build_grid(const CommonOpts& o) {
  double gamma_lo = atlas::kDefaultGammaLo, gamma_hi = atlas::kDefaultGammaHi;
  double p_lo = atlas::kDefaultPLo, p_hi = atlas::kDefaultPHi;
  if (!o.gamma_range.empty())
    std::tie(gamma_lo, gamma_hi) = parse_pair(o.gamma_range, ':', "--gamma-range");
  if (!o.p_range.empty()) std::tie(p_lo, p_hi) = parse_pair(o.p_range, ':', "--p-range");
  return atlas::make_grid(o.res, gamma_lo, gamma_hi, o.res, p_lo, p_hi);
}

atlas::SolveOptions build_options(const CommonOpts& o) {
  atlas::SolveOptions options;
  options.tol = o.tol;
  return options;
}

atlas::SvgStyle build_style(const CommonOpts& o) {
  atlas::SvgStyle style;
  if (!o.palette.empty()) style.palette_override = split_list(o.palette);
  return style;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    atlas::write_text_file(out_path, text);
  }
}

// Inputs to `equiv` may be map CSV files or world kinds.
atlas::BehaviorMap load_map_or_world(const std::string& input, const CommonOpts& o,
                                     const json& cfg) {
  if (std::filesystem::exists(input))
    return atlas::map_from_csv(atlas::read_text_file(input));
  try {
    return atlas::compute_behavior_map(build_world(input, o, cfg), build_grid(o),
                                       build_options(o));
  } catch (const atlas::ValidationError&) {
    if (input.find('.') != std::string::npos || input.find('/') != std::string::npos)
      throw atlas::ValidationError("cannot read file: " + input);
    throw;
  }
}

// ==== subcommands ===========================================================

int cmd_map(const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);
  if (opts.world.empty()) throw atlas::ValidationError("map: --world is required");

  const atlas::World world = build_world(opts.world, opts, cfg);
  const atlas::BehaviorMap map =
      atlas::compute_behavior_map(world, build_grid(opts), build_options(opts));
  emit(opts.out, atlas::map_to_csv(map));
  if (!opts.svg.empty())
    atlas::write_text_file(opts.svg, atlas::render_svg(map, build_style(opts)));
  const atlas::EquivalenceSignature sig = atlas::signature(map);
  std::cout << atlas::signature_json(map.world_id, sig) << "\n";
  return 0;
}

int cmd_equiv(const std::vector<std::string>& inputs, const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);

  const atlas::BehaviorMap map_a = load_map_or_world(inputs[0], opts, cfg);
  const atlas::BehaviorMap map_b = load_map_or_world(inputs[1], opts, cfg);
  const atlas::EquivalenceSignature sig_a = atlas::signature(map_a);
  const atlas::EquivalenceSignature sig_b = atlas::signature(map_b);
  const std::string id_a = map_a.world_id.empty() ? inputs[0] : map_a.world_id;
  const std::string id_b = map_b.world_id.empty() ? inputs[1] : map_b.world_id;
  std::cout << atlas::signature_json(id_a, sig_a) << "\n";
  std::cout << atlas::signature_json(id_b, sig_b) << "\n";
  const bool equivalent = sig_a == sig_b;
  std::cout << "equivalent: " << (equivalent ? "true" : "false") << "\n";
  return equivalent ? 0 : 3;
}

int cmd_sweep(const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);
  if (opts.world.empty()) throw atlas::ValidationError("sweep: --world is required");
  if (opts.preset != "paper-b")
    throw atlas::ValidationError("sweep: unknown preset: " + opts.preset);

  const atlas::WorldKind kind = atlas::world_kind_from_string(opts.world);
  atlas::SweepPreset preset = atlas::sweep_preset(kind);
  const auto& keys = param_keys();
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (opts.param_opts[i] != nullptr && opts.param_opts[i]->count() > 0)
      atlas::set_param(preset.base, keys[i], opts.param_values[i]);

  const atlas::SweepReport report = atlas::perturbation_sweep(
      kind, preset.base, preset.varied, build_grid(opts), build_options(opts));
  if (!opts.out.empty()) atlas::write_text_file(opts.out, atlas::sweep_report_json(report));
  for (const std::string& failure : report.failures)
    std::cerr << "sweep failure: " << failure << "\n";
  std::cout << "cells: " << report.cells.size() << "\n";
  std::cout << "modal: "
            << atlas::signature_json(report.world_id, report.modal) << "\n";
  std::cout << "verdict: " << (report.verdict ? "true" : "false") << "\n";
  return report.verdict ? 0 : 3;
}

int cmd_path(const std::string& map_path, const std::string& from_text,
             const std::string& to_text, int samples, const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);

  const atlas::BehaviorMap map = atlas::map_from_csv(atlas::read_text_file(map_path));
  atlas::InterventionPath path;
  path.waypoints.push_back(parse_pair(from_text, ',', "--from"));
  path.waypoints.push_back(parse_pair(to_text, ',', "--to"));
  const atlas::CrossingReport report = atlas::path_crossings(map, path, samples);
  if (!opts.out.empty())
    atlas::write_text_file(opts.out, atlas::crossing_report_json(report));
  std::cout << "crossings: " << report.crossings << "\n";
  return 0;
}

int cmd_compose(const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);
  if (opts.kind.empty()) throw atlas::ValidationError("compose: --kind is required");

  const atlas::WorldKind kind = atlas::world_kind_from_string(opts.kind);
  const atlas::CompositionResult result = atlas::composition_experiment(
      kind, gather_params(kind, opts, cfg), build_grid(opts), build_options(opts));
  if (!opts.out.empty()) atlas::write_text_file(opts.out, atlas::map_to_csv(result.map));
  if (!opts.svg.empty())
    atlas::write_text_file(opts.svg, atlas::render_svg(result.map, build_style(opts)));
  for (const std::string& warning : result.topology.warnings)
    std::cerr << "topology: " << warning << "\n";
  std::cout << atlas::signature_json(result.map.world_id, result.sig) << "\n";
  std::cout << "behaviors: " << result.sig.num_behaviors << "\n";
  return 0;
}

int cmd_mdp(double gamma, double p, const CommonOpts& o) {
  const json cfg = load_config(o.config);
  CommonOpts opts = o;
  apply_config(opts, cfg);
  if (opts.world.empty()) throw atlas::ValidationError("mdp: --world is required");

  const atlas::World world = build_world(opts.world, opts, cfg);
  const atlas::Traits traits{gamma, p};
  atlas::validate_traits(traits);
  const atlas::UserMdp mdp = atlas::build_user_mdp(world, traits);
  emit(opts.out, atlas::transition_csv(world, mdp));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior atlas: map how optimal gridworld behavior shifts across the\n"
               "discount/confidence trait square, compare maps, and probe interventions."};
  app.require_subcommand(1);

  CommonOpts map_opts;
  CLI::App* map_cmd = app.add_subcommand("map", "compute a behavior map (CSV + signature)");
  add_world_flags(map_cmd, map_opts, false);
  add_grid_flags(map_cmd, map_opts, 101);
  add_output_flags(map_cmd, map_opts, true);

  CommonOpts equiv_opts;
  std::vector<std::string> equiv_inputs;
  CLI::App* equiv_cmd =
      app.add_subcommand("equiv", "compare two maps (CSV files or world kinds)");
  equiv_cmd->add_option("inputs", equiv_inputs, "two map CSVs or world kinds")
      ->expected(2)
      ->required();
  add_world_flags(equiv_cmd, equiv_opts, false);
  add_grid_flags(equiv_cmd, equiv_opts, 101);
  add_output_flags(equiv_cmd, equiv_opts, false);

  CommonOpts sweep_opts;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a perturbation sweep over world parameters");
  add_world_flags(sweep_cmd, sweep_opts, false);
  add_grid_flags(sweep_cmd, sweep_opts, 51);
  add_output_flags(sweep_cmd, sweep_opts, false);
  sweep_opts.preset_opt =
      sweep_cmd->add_option("--preset", sweep_opts.preset, "perturbation preset name");

  CommonOpts path_opts;
  std::string path_map, path_from, path_to;
  int path_samples = 256;
  CLI::App* path_cmd =
      app.add_subcommand("path", "count behavior crossings along a trait-space path");
  path_cmd->add_option("--map", path_map, "behavior map CSV")->required();
  path_cmd->add_option("--from", path_from, "start point as x,y in the unit square")
      ->required();
  path_cmd->add_option("--to", path_to, "end point as x,y in the unit square")->required();
  path_cmd->add_option("--samples", path_samples, "samples per segment")
      ->check(CLI::Range(2, 1000000));
  add_output_flags(path_cmd, path_opts, false);

  CommonOpts compose_opts;
  CLI::App* compose_cmd =
      app.add_subcommand("compose", "run a composite-world experiment");
  compose_cmd->add_option("--kind", compose_opts.kind,
                          "composite kind (cliff-disengage, cafe-3way)");
  add_world_flags(compose_cmd, compose_opts, false);
  add_grid_flags(compose_cmd, compose_opts, 101);
  add_output_flags(compose_cmd, compose_opts, true);

  CommonOpts mdp_opts;
  double mdp_gamma = 0.9, mdp_p = 0.9;
  CLI::App* mdp_cmd =
      app.add_subcommand("mdp", "dump the perceived transition table for one trait point");
  add_world_flags(mdp_cmd, mdp_opts, false);
  mdp_cmd->add_option("--gamma", mdp_gamma, "discount factor")->required();
  mdp_cmd->add_option("--p", mdp_p, "confidence");
  add_output_flags(mdp_cmd, mdp_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (map_cmd->parsed()) return cmd_map(map_opts);
    if (equiv_cmd->parsed()) return cmd_equiv(equiv_inputs, equiv_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    if (path_cmd->parsed()) return cmd_path(path_map, path_from, path_to, path_samples,
                                            path_opts);
    if (compose_cmd->parsed()) return cmd_compose(compose_opts);
    if (mdp_cmd->parsed()) return cmd_mdp(mdp_gamma, mdp_p, mdp_opts);
  } catch (const atlas::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const atlas::NotEquivalentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const atlas::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
