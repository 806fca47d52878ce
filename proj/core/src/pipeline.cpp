#include "liss/pipeline.hpp"

#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "liss/errors.hpp"
#include "liss/io.hpp"
#include "liss/random.hpp"
#include "liss/sampling.hpp"

namespace liss {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string manifest_path(const ExperimentConfig& cfg,
                          const std::string& stage) {
  return join(cfg.output_dir, stage + "_manifest.json");
}

/// Stage manifest: config hash plus per-file content hashes. A stage is a
/// cache hit when the manifest matches the current config and every output
/// still hashes to its recorded value.
void write_manifest(const ExperimentConfig& cfg, const std::string& stage,
                    const std::vector<std::string>& files) {
  json j;
  j["stage"] = stage;
  j["config_hash"] = hash_hex(config_hash(cfg));
  json outs;
  for (const auto& f : files)
    outs[fs::path(f).filename().string()] = hash_hex(fnv1a64(read_file(f)));
  j["outputs"] = outs;
  j["config"] = json::parse(canonical_config_json(cfg));
  atomic_write(manifest_path(cfg, stage), j.dump(2));
}

bool manifest_matches(const ExperimentConfig& cfg, const std::string& stage) {
  const std::string path = manifest_path(cfg, stage);
  if (!file_exists(path)) return false;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (...) {
    return false;
  }
  if (j.value("config_hash", "") != hash_hex(config_hash(cfg))) return false;
  if (!j.contains("outputs")) return false;
  for (auto it = j["outputs"].begin(); it != j["outputs"].end(); ++it) {
    const std::string f = join(cfg.output_dir, it.key());
    if (!file_exists(f)) return false;
    if (hash_hex(fnv1a64(read_file(f))) != it.value().get<std::string>())
      return false;
  }
  return true;
}

StateVector build_x0(const Stepper& st, const SimulateSpec& spec) {
  const Grid& g = st.grid();
  switch (spec.x0_kind) {
    case SimulateSpec::X0Kind::Zero:
      return StateVector::zeros(g);
    case SimulateSpec::X0Kind::Eigenmode: {
      StateVector mode = eigenmode(g, spec.x0_eigenmode);
      return scaled_to_norm(std::move(mode), spec.x0_norm);
    }
    case SimulateSpec::X0Kind::Values:
      return StateVector::from_values(g, spec.x0_values);
  }
  throw Error("unreachable");
}

Disturbance build_u(const SimulateSpec& spec) {
  if (spec.u_piecewise)
    return Disturbance::piecewise(spec.u_breakpoints, spec.u_values);
  return Disturbance::constant(spec.u_constant);
}

}  // namespace

std::string cloud_path(const ExperimentConfig& cfg) {
  return join(cfg.output_dir, "cloud.csv");
}
std::string envelope_path(const ExperimentConfig& cfg) {
  return join(cfg.output_dir, "beta0.json");
}
std::string report_path(const ExperimentConfig& cfg) {
  return join(cfg.output_dir, "report.json");
}
std::string certificate_path(const ExperimentConfig& cfg) {
  return join(cfg.output_dir, "certificate.json");
}

AttractorArtifacts run_attractor_stage(const ExperimentConfig& cfg,
                                       bool force) {
  AttractorArtifacts art;
  if (!force && manifest_matches(cfg, "attractor")) {
    art.cloud = cloud_from_csv(read_file(cloud_path(cfg)));
    art.envelope = envelope_from_json(read_file(envelope_path(cfg)));
    art.cache_hit = true;
    return art;
  }
  const Stepper st = make_stepper(cfg);
  art.cloud = approximate_attractor(st, cfg.attractor);
  EnvelopeFitOptions fit = cfg.fit;
  fit.r0 = cfg.lyapunov.r0;  // envelope radius tracks the Lyapunov ball
  Beta0Fit beta0 = fit_beta0(st, art.cloud, fit);
  art.envelope = beta0.envelope;

  const std::uint64_t hash = config_hash(cfg);
  atomic_write(cloud_path(cfg), cloud_to_csv(art.cloud, hash));
  atomic_write(envelope_path(cfg), envelope_to_json(art.envelope, hash));
  write_manifest(cfg, "attractor", {cloud_path(cfg), envelope_path(cfg)});
  return art;
}

int cmd_attractor(const ExperimentConfig& cfg) {
  AttractorArtifacts art = run_attractor_stage(cfg);
  std::printf("%s: cloud with %zu points, delta = %s, generations = %d%s\n",
              cfg.output_dir.c_str(), art.cloud.points.size(),
              double_repr(art.cloud.resolution).c_str(),
              art.cloud.generations_used,
              art.cache_hit ? " (cache hit)" : "");
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  if (!cfg.simulate)
    throw ConfigError("simulate command needs a \"simulate\" config section");
  const Stepper st = make_stepper(cfg);
  const SimulateSpec& spec = *cfg.simulate;
  const StateVector x0 = build_x0(st, spec);
  const Disturbance u = build_u(spec);

  AttractorCloud cloud;
  bool have_cloud = false;
  if (file_exists(cloud_path(cfg))) {
    cloud = cloud_from_csv(read_file(cloud_path(cfg)));
    have_cloud = cloud.grid == st.grid();
  }

  Trajectory traj;
  try {
    traj = st.evolve(x0, spec.start, spec.t_final, u);
  } catch (const BlowUpError& e) {
    json diag;
    diag["kind"] = "blowup";
    diag["time"] = e.time();
    diag["message"] = e.what();
    diag["config_hash"] = hash_hex(config_hash(cfg));
    atomic_write(join(cfg.output_dir, "blowup.json"), diag.dump(2));
    throw;
  }
  if (traj.time_rounded)
    std::fprintf(stderr,
                 "warning: t_final - start is not a multiple of dt; the "
                 "window was rounded to the nearest step count\n");
  atomic_write(join(cfg.output_dir, "trajectory.csv"),
               trajectory_to_csv(traj, have_cloud ? &cloud : nullptr,
                                 config_hash(cfg)));
  std::printf("%s: %zu states, final norm %s, max amplitude %s\n",
              cfg.output_dir.c_str(), traj.times.size(),
              double_repr(traj.norms.back()).c_str(),
              double_repr(traj.max_amplitude).c_str());
  return kExitOk;
}

int cmd_lyapunov(const ExperimentConfig& cfg) {
  if (!file_exists(cloud_path(cfg)) || !file_exists(envelope_path(cfg)))
    throw ConfigError(
        "missing attractor stage artifacts (cloud.csv / beta0.json); run "
        "the attractor command first");
  const Stepper st = make_stepper(cfg);
  const AttractorCloud cloud = cloud_from_csv(read_file(cloud_path(cfg)));
  const KLEnvelope env = envelope_from_json(read_file(envelope_path(cfg)));
  const LyapunovOracle oracle(st, cloud, env, cfg.lyapunov);
  const IssLyapunovData data = oracle.comparison_data();

  const std::uint64_t hash = config_hash(cfg);
  atomic_write(join(cfg.output_dir, "psi_lower.csv"),
               curve_to_csv(data.psi_lower, "psi_lower", hash));
  atomic_write(join(cfg.output_dir, "psi_upper.csv"),
               curve_to_csv(data.psi_upper, "psi_upper", hash));
  atomic_write(join(cfg.output_dir, "alpha0.csv"),
               curve_to_csv(data.alpha0, "alpha0", hash));
  atomic_write(join(cfg.output_dir, "sigma0.csv"),
               curve_to_csv(data.sigma0, "sigma0", hash));
  atomic_write(join(cfg.output_dir, "chi.csv"),
               curve_to_csv(data.chi, "chi", hash));
  atomic_write(join(cfg.output_dir, "alpha.csv"),
               curve_to_csv(data.alpha, "alpha", hash));

  json meta;
  meta["kind"] = "lyapunov_data";
  meta["config_hash"] = hash_hex(hash);
  meta["c0"] = oracle.c0();
  meta["K"] = oracle.truncation();
  meta["r0"] = oracle.r0();
  meta["tail_bound"] = oracle.tail_bound();
  meta["shrink_times"] = oracle.shrink_times();

  // Small V-field sample: id, dist, V(x).
  json field = json::array();
  for (int j = 0; j < 24; ++j) {
    Rng rng(cloud.seed ^ 0xA5A5A5A5ull, static_cast<std::uint64_t>(j));
    const StateVector& theta = cloud.points[rng.index(cloud.points.size())];
    const double rho = rng.u01() * oracle.r0();
    const StateVector x = add_scaled(
        theta, rho, scaled_to_norm(random_smooth_state(st.grid(), rng), 1.0));
    const double d = dist_to_attractor(x, cloud);
    field.push_back({{"id", j}, {"dist", d}, {"v", oracle.v(x)}});
  }
  meta["v_samples"] = field;
  atomic_write(join(cfg.output_dir, "lyapunov.json"), meta.dump(2));

  write_manifest(cfg, "lyapunov",
                 {join(cfg.output_dir, "psi_lower.csv"),
                  join(cfg.output_dir, "psi_upper.csv"),
                  join(cfg.output_dir, "alpha0.csv"),
                  join(cfg.output_dir, "sigma0.csv"),
                  join(cfg.output_dir, "chi.csv"),
                  join(cfg.output_dir, "alpha.csv"),
                  join(cfg.output_dir, "lyapunov.json")});
  std::printf("%s: lyapunov curves written (tail bound %s)\n",
              cfg.output_dir.c_str(), double_repr(oracle.tail_bound()).c_str());
  return kExitOk;
}

int cmd_certify(const ExperimentConfig& cfg, bool build_missing) {
  if (!file_exists(cloud_path(cfg)) || !file_exists(envelope_path(cfg))) {
    if (!build_missing)
      throw ConfigError(
          "missing attractor stage artifacts (cloud.csv / beta0.json); run "
          "the attractor command first or pass --pipeline");
    run_attractor_stage(cfg);
  }
  if (manifest_matches(cfg, "certify")) {
    const json j = json::parse(read_file(report_path(cfg)));
    const bool passed = j.value("passed", false);
    std::printf("%s: certify cache hit, passed = %s\n", cfg.output_dir.c_str(),
                passed ? "true" : "false");
    return passed ? kExitOk : kExitViolation;
  }

  const Stepper st = make_stepper(cfg);
  const AttractorCloud cloud = cloud_from_csv(read_file(cloud_path(cfg)));
  const KLEnvelope env = envelope_from_json(read_file(envelope_path(cfg)));
  const LyapunovOracle oracle(st, cloud, env, cfg.lyapunov);
  const IssLyapunovData data = oracle.comparison_data();

  CertifyOptions opts = cfg.certify;
  if (opts.r0u_override)
    std::fprintf(stderr,
                 "warning: r0u override requested; values above the "
                 "selected radius are clamped\n");
  auto [cert, report] = certify_liss(oracle, data, opts);

  const std::uint64_t hash = config_hash(cfg);
  atomic_write(certificate_path(cfg), certificate_to_json(cert, hash));
  atomic_write(report_path(cfg), report_to_json(report, hash));
  atomic_write(join(cfg.output_dir, "margins.csv"),
               margins_to_csv(report, hash));
  write_manifest(cfg, "certify",
                 {certificate_path(cfg), report_path(cfg),
                  join(cfg.output_dir, "margins.csv")});

  std::printf(
      "%s: r0x = %s, r0u = %s, min margin = %s, violations = %zu, "
      "mu violations = %d -> %s\n",
      cfg.output_dir.c_str(), double_repr(cert.r0x).c_str(),
      double_repr(cert.r0u).c_str(), double_repr(report.min_margin).c_str(),
      report.violations.size(), report.mu.violations,
      report.passed ? "PASS" : "FAIL");
  return report.passed ? kExitOk : kExitViolation;
}

int cmd_validate(const ExperimentConfig& cfg) {
  const NonlinearSpec spec = make_nonlinearity(cfg);
  const ValidationReport rep = validate_conditions(spec, 10.0, 20001);
  atomic_write(join(cfg.output_dir, "validation.json"),
               validation_to_json(rep, config_hash(cfg)));
  std::printf(
      "condition check: %s (lower %s upper %s derivative %s); worst slacks "
      "%s / %s / %s\n",
      rep.pass ? "PASS" : "FAIL", rep.lower_ok ? "ok" : "violated",
      rep.upper_ok ? "ok" : "violated", rep.derivative_ok ? "ok" : "violated",
      double_repr(rep.min_slack_lower).c_str(),
      double_repr(rep.min_slack_upper).c_str(),
      double_repr(rep.min_slack_derivative).c_str());
  return rep.pass ? kExitOk : kExitViolation;
}

}  // namespace liss
