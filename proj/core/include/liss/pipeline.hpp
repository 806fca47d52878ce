#pragma once

#include <string>

#include "liss/config.hpp"

namespace liss {

/// Exit codes shared by the CLI and the pipeline commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerics = 3;

struct AttractorArtifacts {
  AttractorCloud cloud;
  KLEnvelope envelope;
  bool cache_hit = false;
};

/// attractor stage: builds (or loads, on matching manifest) the cloud and
/// the KL envelope; writes cloud.csv, beta0.json and the stage manifest.
AttractorArtifacts run_attractor_stage(const ExperimentConfig& cfg,
                                       bool force = false);

/// lyapunov stage: curve dumps (psi_lower, psi_upper, alpha0, sigma0, chi,
/// alpha), the shrink-time table and a V-field sample.
int cmd_lyapunov(const ExperimentConfig& cfg);

/// simulate: trajectory CSV (dist column when a cloud artifact exists).
int cmd_simulate(const ExperimentConfig& cfg);

/// attractor stage as a command.
int cmd_attractor(const ExperimentConfig& cfg);

/// certify: certificate.json + report.json + margins.csv; exit 0 iff the
/// falsification found no violations. `build_missing` lets the command
/// build upstream artifacts instead of failing on their absence.
int cmd_certify(const ExperimentConfig& cfg, bool build_missing = false);

/// validate: growth/derivative condition report for the configured g.
int cmd_validate(const ExperimentConfig& cfg);

/// Paths used by the stages (relative to cfg.output_dir).
std::string cloud_path(const ExperimentConfig& cfg);
std::string envelope_path(const ExperimentConfig& cfg);
std::string report_path(const ExperimentConfig& cfg);
std::string certificate_path(const ExperimentConfig& cfg);

}  // namespace liss
