#include "perbif/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "perbif/png.hpp"
#include "perbif/potentials.hpp"

namespace perbif::cli {

using perbif::to_json;

namespace {

namespace fs = std::filesystem;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "': " + j.at(key).dump());
  }
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

ParamPoint read_param(const json& cfg) {
  if (cfg.contains("family")) return param_from_json(cfg.at("family"));
  if (cfg.contains("param")) return param_from_json(cfg.at("param"));
  return param_from_json(cfg);
}

int config_degree(const json& cfg) {
  if (cfg.contains("family") && cfg.at("family").contains("d")) return require_int(cfg.at("family"), "d");
  if (cfg.contains("d")) return require_int(cfg, "d");
  if (cfg.contains("slice") && cfg.at("slice").contains("d")) return require_int(cfg.at("slice"), "d");
  return 2;
}

SolverOptions read_solver(const json& cfg, const Flags& flags) {
  SolverOptions o;
  const json& s = cfg.contains("solver") ? cfg.at("solver") : json::object();
  o.max_degree = get_or<long long>(s, "max_degree", o.max_degree);
  o.cluster_tol = get_or<double>(s, "cluster_tol", o.cluster_tol);
  o.residual_tol = get_or<double>(s, "residual_tol", o.residual_tol);
  o.root_of_unity_tol = get_or<double>(s, "root_of_unity_tol", o.root_of_unity_tol);
  o.max_rounds = get_or<int>(s, "max_rounds", o.max_rounds);
  o.newton_max_degree = get_or<long long>(s, "newton_max_degree", o.newton_max_degree);
  o.include_infinity = get_or<bool>(s, "include_infinity", false) || flags.include_infinity;
  const std::string m = get_or<std::string>(s, "method", "auto");
  if (m == "auto" || m == "automatic") o.method = SolverMethod::automatic;
  else if (m == "newton") o.method = SolverMethod::newton;
  else if (m == "continuation") o.method = SolverMethod::continuation;
  else throw ConfigError("unknown solver method '" + m + "'");
  return o;
}

std::uint64_t read_seed(const json& cfg, const Flags& flags) {
  if (flags.seed) return *flags.seed;
  const json& e = cfg.contains("estimator") ? cfg.at("estimator") : json::object();
  return get_or<std::uint64_t>(e, "seed", get_or<std::uint64_t>(cfg, "seed", 1));
}

FieldOptions read_field_options(const json& cfg, const Flags& flags) {
  FieldOptions o;
  const json& e = cfg.contains("estimator") ? cfg.at("estimator") : json::object();
  const std::string kind = get_or<std::string>(e, "kind", "critical_green");
  if (kind == "critical_green") o.estimator = LyapunovField::critical_green;
  else if (kind == "measure" || kind == "equilibrium_measure") o.estimator = LyapunovField::equilibrium_measure;
  else throw ConfigError("unknown estimator kind '" + kind + "'");
  o.samples = get_or<int>(e, "samples", o.samples);
  o.depth = get_or<int>(e, "depth", o.depth);
  o.green.depth = get_or<int>(e, "green_depth", o.green.depth);
  o.seed = read_seed(cfg, flags);
  if (o.samples < 1 || o.depth < 2) throw ConfigError("estimator samples/depth out of range");
  return o;
}

SliceSpec read_slice(const json& cfg) {
  if (!cfg.contains("slice")) throw ConfigError("config is missing 'slice'");
  return slice_from_json(cfg.at("slice"), config_degree(cfg));
}

std::vector<cplx> read_ws(const json& cfg) {
  std::vector<cplx> ws;
  if (cfg.contains("ws")) {
    if (!cfg.at("ws").is_array()) throw ConfigError("'ws' must be a list");
    for (const auto& w : cfg.at("ws")) ws.push_back(complex_from_json(w));
  } else if (cfg.contains("w")) {
    ws.push_back(complex_from_json(cfg.at("w")));
  } else {
    ws.emplace_back(0.0, 0.0);
  }
  if (ws.empty()) throw ConfigError("'ws' is empty");
  return ws;
}

// Largest n with d^n <= cap.
int default_level(int d, long long cap) {
  int n = 1;
  long long D = d;
  while (D <= cap / d) {
    D *= d;
    ++n;
  }
  return n;
}

std::string prefix_of(const json& cfg, const std::string& fallback) {
  const json& o = cfg.contains("output") ? cfg.at("output") : json::object();
  return get_or<std::string>(o, "prefix", fallback);
}

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;
  void text(const std::string& name, const std::string& body) {
    write_text(dir / name, body);
    files.push_back((dir / name).string());
  }
  void field(const GridField& f, const std::string& name) {
    write_field(f, dir / name);
    files.push_back((dir / (name + ".bin")).string());
    files.push_back((dir / (name + ".json")).string());
  }
  void png(const std::string& name, int res, const std::vector<std::uint8_t>& img) {
    write_png_gray(dir / name, res, res, img);
    files.push_back((dir / name).string());
  }
};

int cmd_spectrum(const json& cfg, const Flags& flags, Outputs& out) {
  const ParamPoint p = read_param(cfg);
  const int n = require_int(cfg, "n");
  if (n < 1) throw ConfigError("'n' must be >= 1");
  const SolverOptions opts = read_solver(cfg, flags);
  const PolynomialMap map(p);
  const auto points = periodic_points(map, n, opts);
  const auto cycles = classify_cycles(points, map, n, opts);
  const auto spec = spectrum_from_cycles(cycles, map, n, opts);
  json j = to_json(spec);
  json cyc = json::array();
  for (const auto& c : cycles) cyc.push_back(to_json(c));
  j["cycles"] = cyc;
  out.text(prefix_of(cfg, "spectrum") + ".json", dump(j));
  return ok;
}

int cmd_lyapunov(const json& cfg, const Flags& flags, Outputs& out) {
  const ParamPoint p = read_param(cfg);
  const SolverOptions opts = read_solver(cfg, flags);
  const json& e = cfg.contains("estimator") ? cfg.at("estimator") : json::object();
  const int n = get_or<int>(e, "n", get_or<int>(cfg, "n", default_level(p.d, 1024)));
  const int samples = get_or<int>(e, "samples", 10000);
  const int depth = get_or<int>(e, "depth", 40);
  if (n < 1 || samples < 1 || depth < 2) throw ConfigError("estimator n/samples/depth out of range");
  const PolynomialMap map(p);
  const auto rep = lyapunov_repelling(map, n, opts);
  const auto mea = lyapunov_measure(map, samples, depth, read_seed(cfg, flags));
  json j = {{"param", to_json(p)},
            {"repelling", to_json(rep)},
            {"measure", to_json(mea)},
            {"delta", std::abs(rep.value - mea.value)}};
  try {
    j["critical_green"] = to_json(lyapunov_critical_green(map));
  } catch (const Undecided&) {
    j["critical_green"] = nullptr;
  }
  out.text(prefix_of(cfg, "lyapunov") + ".json", dump(j));
  return ok;
}

GridField compute_field(const json& cfg, const Flags& flags, const std::string& kind) {
  const SliceSpec slice = read_slice(cfg);
  const FieldKind k = field_kind_from_string(kind);
  switch (k) {
    case FieldKind::L:
      return field_L(slice, read_field_options(cfg, flags));
    case FieldKind::L_n:
    case FieldKind::L_n_plus: {
      const int n = require_int(cfg, "n");
      const cplx w = read_ws(cfg).front();
      if (k == FieldKind::L_n_plus) throw ConfigError("field kind L_n_plus is not a grid command");
      return field_Ln(slice, n, w, read_solver(cfg, flags));
    }
    case FieldKind::membership:
      return membership_field(slice, get_or<int>(cfg, "critical_index", 0),
                              read_field_options(cfg, flags).green);
    case FieldKind::activity:
      return activity_field(slice, get_or<int>(cfg, "critical_index", -1),
                            read_field_options(cfg, flags).green);
    case FieldKind::laplacian_mass:
      return bif_measure(field_L(slice, read_field_options(cfg, flags)));
  }
  throw ConfigError("unknown field kind");
}

int nan_exit(const GridField& f) { return f.nan_count > 0 ? partial_report : ok; }

int cmd_field(const json& cfg, const Flags& flags, Outputs& out) {
  const std::string kind = get_or<std::string>(cfg, "field", "L");
  const GridField f = compute_field(cfg, flags, kind);
  const std::string name = prefix_of(cfg, "field_" + kind);
  out.field(f, name);
  if (flags.png) out.png(name + ".png", f.slice.resolution, field_to_gray(f));
  return nan_exit(f);
}

int cmd_bifmeasure(const json& cfg, const Flags& flags, Outputs& out) {
  GridField L;
  if (cfg.contains("input")) {
    L = read_field(get_or<std::string>(cfg, "input", ""));
    if (L.kind != FieldKind::L) throw ConfigError("bifmeasure input must be a field of kind L");
  } else {
    L = field_L(read_slice(cfg), read_field_options(cfg, flags));
  }
  const GridField m = bif_measure(L);
  const std::string name = prefix_of(cfg, "bifmeasure");
  out.field(m, name);
  out.text(name + "_summary.json",
           dump({{"total_mass", m.total_mass}, {"clamped_mass", m.clamped_mass},
                 {"signed_mass", m.total_mass - m.clamped_mass},
                 {"nan_count", m.nan_count}, {"slice", to_json(m.slice)}}));
  if (flags.png) out.png(name + ".png", m.slice.resolution, field_to_gray(m));
  return ok;
}

void check_w(const std::vector<cplx>& ws, const Flags& flags) {
  for (cplx w : ws)
    if (std::abs(w) > 1.0 && !flags.allow_outside)
      throw ConfigError("|w| > 1 needs --allow-outside");
}

PernOptions read_pern(const json& cfg, const Flags& flags) {
  PernOptions o;
  o.solver = read_solver(cfg, flags);
  const json& p = cfg.contains("pern") ? cfg.at("pern") : json::object();
  o.block = get_or<int>(p, "block", o.block);
  o.merge_tol = get_or<double>(p, "merge_tol", o.merge_tol);
  o.accept_tol = get_or<double>(p, "accept_tol", o.accept_tol);
  o.max_newton = get_or<int>(p, "max_newton", o.max_newton);
  if (o.block < 2) throw ConfigError("pern block must be >= 2");
  return o;
}

int cmd_pern_roots(const json& cfg, const Flags& flags, Outputs& out) {
  const SliceSpec slice = read_slice(cfg);
  const int n = require_int(cfg, "n");
  const auto ws = read_ws(cfg);
  check_w(ws, flags);
  const PernReport r = pern_roots_in_slice(slice, n, ws.front(), read_pern(cfg, flags));
  json j = to_json(r);
  j["n"] = n;
  j["w"] = to_json(ws.front());
  j["slice"] = to_json(slice);
  const std::string name = prefix_of(cfg, "pern_roots");
  out.text(name + ".json", dump(j));
  if (flags.png) {
    auto img = field_to_gray(activity_field(slice, -1));
    std::vector<cplx> ts;
    for (const auto& x : r.roots) ts.push_back(x.t);
    mark_points(img, slice, ts);
    out.png(name + ".png", slice.resolution, img);
  }
  return r.ok ? ok : partial_report;
}

int cmd_equidist(const json& cfg, const Flags& flags, Outputs& out) {
  const SliceSpec slice = read_slice(cfg);
  const auto ws = read_ws(cfg);
  check_w(ws, flags);
  if (!cfg.contains("periods") || !cfg.at("periods").is_array() || cfg.at("periods").empty())
    throw ConfigError("config needs a non-empty 'periods' list");
  std::vector<int> periods;
  for (const auto& v : cfg.at("periods")) {
    if (!v.is_number_integer() || v.get<int>() < 1) throw ConfigError("periods must be positive integers");
    periods.push_back(v.get<int>());
  }
  EquidistOptions o;
  o.pern = read_pern(cfg, flags);
  o.field = read_field_options(cfg, flags);
  o.mask_radius = get_or<int>(cfg, "mask_radius", o.mask_radius);
  const auto reps = equidist_reports(slice, periods, ws, o);

  const std::string name = prefix_of(cfg, "equidist");
  json all = json::array();
  json timing = json::array();
  bool partial = false;
  for (const auto& r : reps) {
    all.push_back(to_json(r));
    timing.push_back({{"w", to_json(r.w)}, {"periods", r.periods}, {"runtime_s", r.runtime_s}});
    for (char f : r.failed) partial |= f != 0;
  }
  out.text(name + ".json", dump({{"slice", to_json(slice)}, {"reports", all}}));
  out.text(name + ".csv", equidist_csv(reps));
  out.text(name + "_timing.json", dump(timing));
  if (flags.png) {
    const GridField act = activity_field(slice, -1);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      auto img = field_to_gray(act);
      std::vector<cplx> ts;
      for (const auto& level : reps[k].roots)
        for (const auto& x : level) ts.push_back(x.t);
      mark_points(img, slice, ts);
      out.png(name + "_w" + std::to_string(k) + ".png", slice.resolution, img);
    }
  }
  return partial ? partial_report : ok;
}

int cmd_render(const json& cfg, const Flags&, Outputs& out) {
  if (!cfg.contains("input")) throw ConfigError("render needs 'input' (a field file prefix)");
  const GridField f = read_field(get_or<std::string>(cfg, "input", ""));
  auto img = field_to_gray(f);
  if (cfg.contains("markers")) {
    std::vector<cplx> ts;
    for (const auto& m : cfg.at("markers")) ts.push_back(complex_from_json(m));
    mark_points(img, f.slice, ts);
  }
  out.png(prefix_of(cfg, "render") + ".png", f.slice.resolution, img);
  return ok;
}

}  // namespace

json to_json(const RunManifest& m) {
  return {{"command", m.command},     {"config_hash", m.config_hash},
          {"seed", m.seed},           {"versions", m.versions},
          {"wall_time_s", m.wall_time_s}, {"outputs", m.outputs}};
}

int run_command(const std::string& command, const json& config, const Flags& flags,
                std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Outputs out{flags.out, {}};
  int code = ok;
  try {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    if (command == "spectrum") code = cmd_spectrum(config, flags, out);
    else if (command == "lyapunov") code = cmd_lyapunov(config, flags, out);
    else if (command == "field") code = cmd_field(config, flags, out);
    else if (command == "bifmeasure") code = cmd_bifmeasure(config, flags, out);
    else if (command == "pern-roots") code = cmd_pern_roots(config, flags, out);
    else if (command == "equidist") code = cmd_equidist(config, flags, out);
    else if (command == "render") code = cmd_render(config, flags, out);
    else throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const IncompleteSolve& e) {
    err << "solver incomplete: " << e.what() << '\n';
    code = solver_incomplete;
  } catch (const AmbiguousGrouping& e) {
    err << "solver incomplete: " << e.what() << '\n';
    code = solver_incomplete;
  } catch (const Undecided& e) {
    err << "solver incomplete: " << e.what() << '\n';
    code = solver_incomplete;
  }
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(config);
  m.seed = 1;
  try {
    m.seed = read_seed(config, flags);
  } catch (const std::exception&) {
  }
  m.versions = kVersion;
  m.outputs = out.files;
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json mj = to_json(m);
  mj["config"] = config;
  mj["exit_code"] = code;
  write_text(flags.out / (command + "_manifest.json"), dump(mj));
  return code;
}

int main(int argc, char** argv) {
  CLI::App app{"perbif: multiplier spectra, Lyapunov potentials and bifurcation measures"};
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  Flags flags;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  auto* cfg_opt = app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_flag("--png", flags.png, "also write grayscale PNG images");
  app.add_flag("--allow-outside", flags.allow_outside, "accept |w| > 1");
  app.add_flag("--include-infinity", flags.include_infinity,
               "count the fixed point at infinity in level-1 spectra");
  cfg_opt->configurable(false);
  app.require_subcommand(1);
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "multiplier spectrum and cycles at one parameter"},
      {"lyapunov", "Lyapunov exponent by three estimators"},
      {"field", "L, L_n, membership, activity or Laplacian mass over a slice"},
      {"bifmeasure", "bifurcation measure of an L field"},
      {"pern-roots", "zeros of p_n(., w) in a slice window"},
      {"equidist", "L1 distance of L_n to L and root masses per period"},
      {"render", "grayscale PNG of a stored field"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }
  flags.out = out_dir;
  if (*seed_opt) flags.seed = seed;
  json cfg;
  try {
    cfg = json::parse(read_text(config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, flags, std::cerr);
}

}  // namespace perbif::cli
