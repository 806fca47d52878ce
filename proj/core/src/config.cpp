#include "liss/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "liss/errors.hpp"
#include "liss/io.hpp"
#include "liss/random.hpp"

namespace liss {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + where + "." + it.key() + "\"");
}

const json& require(const json& obj, const char* key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError("missing required key \"" + where + "." + key + "\"");
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number())
    throw ConfigError("key \"" + where + "\" must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer())
    throw ConfigError("key \"" + where + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> as_array(const json& v, const std::string& where) {
  if (!v.is_array())
    throw ConfigError("key \"" + where + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, where));
  return out;
}

SimulateSpec parse_simulate(const json& sim) {
  check_keys(sim, {"x0", "u", "start", "t_final"}, "simulate");
  SimulateSpec spec;
  const json& x0 = require(sim, "x0", "simulate");
  check_keys(x0, {"zero", "eigenmode", "norm", "values"}, "simulate.x0");
  if (x0.contains("values")) {
    spec.x0_kind = SimulateSpec::X0Kind::Values;
    spec.x0_values = as_array(x0["values"], "simulate.x0.values");
  } else if (x0.contains("eigenmode")) {
    spec.x0_kind = SimulateSpec::X0Kind::Eigenmode;
    spec.x0_eigenmode = as_int(x0["eigenmode"], "simulate.x0.eigenmode");
    if (x0.contains("norm"))
      spec.x0_norm = as_number(x0["norm"], "simulate.x0.norm");
  } else if (x0.contains("zero")) {
    spec.x0_kind = SimulateSpec::X0Kind::Zero;
  } else {
    throw ConfigError("simulate.x0 needs one of: zero, eigenmode, values");
  }
  const json& u = require(sim, "u", "simulate");
  check_keys(u, {"constant", "breakpoints", "values"}, "simulate.u");
  if (u.contains("breakpoints")) {
    spec.u_piecewise = true;
    spec.u_breakpoints = as_array(u["breakpoints"], "simulate.u.breakpoints");
    spec.u_values = as_array(require(u, "values", "simulate.u"),
                             "simulate.u.values");
  } else if (u.contains("constant")) {
    spec.u_constant = as_number(u["constant"], "simulate.u.constant");
  } else {
    throw ConfigError("simulate.u needs one of: constant, breakpoints");
  }
  if (sim.contains("start"))
    spec.start = as_number(sim["start"], "simulate.start");
  spec.t_final = as_number(require(sim, "t_final", "simulate"),
                           "simulate.t_final");
  return spec;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root,
             {"grid", "nonlinearity", "control_shape", "stepper", "attractor",
              "lyapunov", "certify", "output", "simulate"},
             "config");

  ExperimentConfig cfg;

  const json& grid = require(root, "grid", "config");
  check_keys(grid, {"L", "n"}, "grid");
  cfg.L = as_number(require(grid, "L", "grid"), "grid.L");
  cfg.n = as_int(require(grid, "n", "grid"), "grid.n");

  const json& nl = require(root, "nonlinearity", "config");
  check_keys(nl, {"builtin", "coefficients", "certificate"}, "nonlinearity");
  if (nl.contains("builtin")) {
    cfg.builtin = nl["builtin"].get<std::string>();
    if (cfg.builtin != "chafee_infante" && cfg.builtin != "zero")
      throw ConfigError("nonlinearity.builtin must be chafee_infante or zero");
    if (nl.contains("coefficients") || nl.contains("certificate"))
      throw ConfigError(
          "nonlinearity.builtin excludes coefficients/certificate");
  } else {
    cfg.coefficients =
        as_array(require(nl, "coefficients", "nonlinearity"),
                 "nonlinearity.coefficients");
    if (nl.contains("certificate")) {
      const json& cert = nl["certificate"];
      check_keys(cert, {"p", "q", "alpha1", "alpha2", "kappa", "lambda"},
                 "nonlinearity.certificate");
      CertificateOverride o{};
      o.p = as_number(require(cert, "p", "certificate"), "certificate.p");
      o.q = as_number(require(cert, "q", "certificate"), "certificate.q");
      o.alpha1 = as_number(require(cert, "alpha1", "certificate"),
                           "certificate.alpha1");
      o.alpha2 = as_number(require(cert, "alpha2", "certificate"),
                           "certificate.alpha2");
      o.kappa = as_number(require(cert, "kappa", "certificate"),
                          "certificate.kappa");
      o.lambda = as_number(require(cert, "lambda", "certificate"),
                           "certificate.lambda");
      cfg.certificate = o;
    }
  }

  const json& shape = require(root, "control_shape", "config");
  check_keys(shape, {"eigenmode", "values"}, "control_shape");
  if (shape.contains("values"))
    cfg.shape_values = as_array(shape["values"], "control_shape.values");
  else if (shape.contains("eigenmode"))
    cfg.shape_eigenmode = as_int(shape["eigenmode"], "control_shape.eigenmode");
  else
    throw ConfigError("control_shape needs eigenmode or values");

  if (root.contains("stepper")) {
    const json& st = root["stepper"];
    check_keys(st, {"dt"}, "stepper");
    if (st.contains("dt")) cfg.dt = as_number(st["dt"], "stepper.dt");
  }

  if (root.contains("attractor")) {
    const json& at = root["attractor"];
    check_keys(at,
               {"ensemble", "delta_target", "burn_in", "seed", "radius",
                "snapshot_interval", "max_generations", "fit_samples",
                "fit_horizon", "fit_seed", "fit_r0", "inflation"},
               "attractor");
    if (at.contains("ensemble"))
      cfg.attractor.ensemble = as_int(at["ensemble"], "attractor.ensemble");
    if (at.contains("delta_target"))
      cfg.attractor.delta_target =
          as_number(at["delta_target"], "attractor.delta_target");
    if (at.contains("burn_in"))
      cfg.attractor.burn_in = as_number(at["burn_in"], "attractor.burn_in");
    if (at.contains("seed"))
      cfg.attractor.seed = static_cast<std::uint64_t>(
          as_number(at["seed"], "attractor.seed"));
    if (at.contains("radius"))
      cfg.attractor.radius = as_number(at["radius"], "attractor.radius");
    if (at.contains("snapshot_interval"))
      cfg.attractor.snapshot_interval =
          as_number(at["snapshot_interval"], "attractor.snapshot_interval");
    if (at.contains("max_generations"))
      cfg.attractor.max_generations =
          as_int(at["max_generations"], "attractor.max_generations");
    if (at.contains("fit_samples"))
      cfg.fit.samples = as_int(at["fit_samples"], "attractor.fit_samples");
    if (at.contains("fit_horizon"))
      cfg.fit.horizon = as_number(at["fit_horizon"], "attractor.fit_horizon");
    if (at.contains("fit_seed"))
      cfg.fit.seed = static_cast<std::uint64_t>(
          as_number(at["fit_seed"], "attractor.fit_seed"));
    if (at.contains("fit_r0"))
      cfg.fit.r0 = as_number(at["fit_r0"], "attractor.fit_r0");
    if (at.contains("inflation"))
      cfg.fit.inflation = as_number(at["inflation"], "attractor.inflation");
  }

  if (root.contains("lyapunov")) {
    const json& ly = root["lyapunov"];
    check_keys(ly, {"c0", "K", "r0", "psi_terms"}, "lyapunov");
    if (ly.contains("c0")) cfg.lyapunov.c0 = as_number(ly["c0"], "lyapunov.c0");
    if (ly.contains("K")) cfg.lyapunov.truncation = as_int(ly["K"], "lyapunov.K");
    if (ly.contains("r0")) cfg.lyapunov.r0 = as_number(ly["r0"], "lyapunov.r0");
    if (ly.contains("psi_terms"))
      cfg.lyapunov.psi_terms = as_int(ly["psi_terms"], "lyapunov.psi_terms");
  }

  if (root.contains("certify")) {
    const json& ce = root["certify"];
    check_keys(ce,
               {"samples", "horizon", "seed", "tolerance", "mu_samples",
                "mu_u_norm", "mu_horizon", "r0u_override", "max_breakpoints"},
               "certify");
    if (ce.contains("samples"))
      cfg.certify.samples = as_int(ce["samples"], "certify.samples");
    if (ce.contains("horizon"))
      cfg.certify.horizon = as_number(ce["horizon"], "certify.horizon");
    if (ce.contains("seed"))
      cfg.certify.seed = static_cast<std::uint64_t>(
          as_number(ce["seed"], "certify.seed"));
    if (ce.contains("tolerance"))
      cfg.certify.tolerance = as_number(ce["tolerance"], "certify.tolerance");
    if (ce.contains("mu_samples"))
      cfg.certify.mu_samples = as_int(ce["mu_samples"], "certify.mu_samples");
    if (ce.contains("mu_u_norm"))
      cfg.certify.mu_u_norm = as_number(ce["mu_u_norm"], "certify.mu_u_norm");
    if (ce.contains("mu_horizon"))
      cfg.certify.mu_horizon =
          as_number(ce["mu_horizon"], "certify.mu_horizon");
    if (ce.contains("r0u_override"))
      cfg.certify.r0u_override =
          as_number(ce["r0u_override"], "certify.r0u_override");
    if (ce.contains("max_breakpoints"))
      cfg.certify.max_breakpoints =
          as_int(ce["max_breakpoints"], "certify.max_breakpoints");
  }

  if (root.contains("output")) {
    if (!root["output"].is_string())
      throw ConfigError("output must be a string path");
    cfg.output_dir = root["output"].get<std::string>();
  }

  if (root.contains("simulate")) cfg.simulate = parse_simulate(root["simulate"]);

  // Basic sanity on the physical parameters (detailed checks happen at
  // object construction).
  if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
  if (cfg.n < 1) throw ConfigError("grid.n must be >= 1");
  if (!(cfg.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
  if (cfg.builtin.empty() && cfg.coefficients.empty())
    throw ConfigError("nonlinearity needs builtin or coefficients");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  json root;
  root["grid"] = {{"L", cfg.L}, {"n", cfg.n}};
  json nl;
  if (!cfg.builtin.empty()) {
    nl["builtin"] = cfg.builtin;
  } else {
    nl["coefficients"] = cfg.coefficients;
    if (cfg.certificate) {
      const auto& o = *cfg.certificate;
      nl["certificate"] = {{"p", o.p},         {"q", o.q},
                           {"alpha1", o.alpha1}, {"alpha2", o.alpha2},
                           {"kappa", o.kappa},   {"lambda", o.lambda}};
    }
  }
  root["nonlinearity"] = nl;
  if (!cfg.shape_values.empty())
    root["control_shape"] = {{"values", cfg.shape_values}};
  else
    root["control_shape"] = {{"eigenmode", cfg.shape_eigenmode}};
  root["stepper"] = {{"dt", cfg.dt}};
  root["attractor"] = {{"ensemble", cfg.attractor.ensemble},
                       {"delta_target", cfg.attractor.delta_target},
                       {"burn_in", cfg.attractor.burn_in},
                       {"seed", cfg.attractor.seed},
                       {"radius", cfg.attractor.radius},
                       {"snapshot_interval", cfg.attractor.snapshot_interval},
                       {"max_generations", cfg.attractor.max_generations},
                       {"fit_samples", cfg.fit.samples},
                       {"fit_horizon", cfg.fit.horizon},
                       {"fit_seed", cfg.fit.seed},
                       {"fit_r0", cfg.fit.r0},
                       {"inflation", cfg.fit.inflation}};
  root["lyapunov"] = {{"c0", cfg.lyapunov.c0},
                      {"K", cfg.lyapunov.truncation},
                      {"r0", cfg.lyapunov.r0},
                      {"psi_terms", cfg.lyapunov.psi_terms}};
  json ce = {{"samples", cfg.certify.samples},
             {"horizon", cfg.certify.horizon},
             {"seed", cfg.certify.seed},
             {"tolerance", cfg.certify.tolerance},
             {"mu_samples", cfg.certify.mu_samples},
             {"mu_u_norm", cfg.certify.mu_u_norm},
             {"mu_horizon", cfg.certify.mu_horizon},
             {"max_breakpoints", cfg.certify.max_breakpoints}};
  if (cfg.certify.r0u_override) ce["r0u_override"] = *cfg.certify.r0u_override;
  root["certify"] = ce;
  root["output"] = cfg.output_dir;
  return root.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_config_json(cfg));
}

void apply_seed_override(ExperimentConfig& cfg, std::uint64_t root) {
  std::uint64_t s = root;
  cfg.attractor.seed = splitmix64(s);
  cfg.fit.seed = splitmix64(s);
  cfg.certify.seed = splitmix64(s);
}

void apply_thread_override(ExperimentConfig& cfg, unsigned threads) {
  cfg.attractor.threads = threads;
  cfg.fit.threads = threads;
  cfg.certify.threads = threads;
}

NonlinearSpec make_nonlinearity(const ExperimentConfig& cfg) {
  if (cfg.builtin == "chafee_infante") return chafee_infante();
  if (cfg.builtin == "zero") return zero_reaction();
  if (cfg.certificate) {
    const auto& o = *cfg.certificate;
    const std::vector<double> coeffs = cfg.coefficients;
    std::vector<double> dcoeffs(std::max<std::size_t>(coeffs.size(), 2) - 1,
                                0.0);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
      dcoeffs[i - 1] = static_cast<double>(i) * coeffs[i];
    auto horner = [](const std::vector<double>& c, double r) {
      double acc = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) acc = acc * r + c[i];
      return acc;
    };
    return NonlinearSpec::make(
        [coeffs, horner](double r) { return horner(coeffs, r); },
        [dcoeffs, horner](double r) { return horner(dcoeffs, r); }, o.p, o.q,
        o.alpha1, o.alpha2, o.kappa, o.lambda, coeffs);
  }
  return odd_polynomial(cfg.coefficients);
}

Stepper make_stepper(const ExperimentConfig& cfg) {
  const Grid grid = Grid::make(cfg.L, cfg.n);
  NonlinearSpec spec = make_nonlinearity(cfg);
  ControlShape shape =
      cfg.shape_values.empty()
          ? ControlShape::eigenmode(grid, cfg.shape_eigenmode)
          : ControlShape::make(
                StateVector::from_values(grid, cfg.shape_values));
  StepperOptions opts;
  opts.dt = cfg.dt;
  return Stepper(grid, std::move(spec), std::move(shape), opts);
}

}  // namespace liss
