#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liss/attractor.hpp"
#include "liss/certify.hpp"
#include "liss/evolve.hpp"
#include "liss/lyapunov.hpp"

namespace liss {

/// Initial state / disturbance / window for the simulate command.
struct SimulateSpec {
  enum class X0Kind { Zero, Eigenmode, Values };
  X0Kind x0_kind = X0Kind::Zero;
  int x0_eigenmode = 1;
  double x0_norm = 1.0;
  std::vector<double> x0_values;

  bool u_piecewise = false;
  double u_constant = 0.0;
  std::vector<double> u_breakpoints;
  std::vector<double> u_values;

  double start = 0.0;
  double t_final = 1.0;
};

/// Certificate constants supplied explicitly instead of derived by scan.
struct CertificateOverride {
  double p, q, alpha1, alpha2, kappa, lambda;
};

/// Full experiment description. Physical parameters (grid, nonlinearity,
/// control shape) have no defaults and must appear in the file; numerical
/// knobs default here and the effective values are recorded into every
/// artifact.
struct ExperimentConfig {
  double L = 0.0;
  int n = 0;

  std::string builtin;  // "chafee_infante" | "zero" | empty for polynomial
  std::vector<double> coefficients;
  std::optional<CertificateOverride> certificate;

  int shape_eigenmode = 1;             // used when shape_values empty
  std::vector<double> shape_values;    // explicit node values

  double dt = 1e-3;

  AttractorOptions attractor;
  EnvelopeFitOptions fit;
  LyapunovOptions lyapunov;
  CertifyOptions certify;

  std::string output_dir = "out";
  std::optional<SimulateSpec> simulate;
};

/// Strict JSON parsing: unknown keys are rejected with the offending key
/// named in the error.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON with all defaults filled; keys sorted. This is what
/// gets hashed and embedded into artifacts.
std::string canonical_config_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Root-seed override: derives the per-stage seeds deterministically.
void apply_seed_override(ExperimentConfig& cfg, std::uint64_t root);
void apply_thread_override(ExperimentConfig& cfg, unsigned threads);

NonlinearSpec make_nonlinearity(const ExperimentConfig& cfg);
Stepper make_stepper(const ExperimentConfig& cfg);

}  // namespace liss
