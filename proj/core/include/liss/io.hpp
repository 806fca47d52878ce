#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "liss/attractor.hpp"
#include "liss/certify.hpp"
#include "liss/evolve.hpp"
#include "liss/system.hpp"

namespace liss {

/// FNV-1a 64-bit hash; used for config and artifact fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

/// Shortest exact decimal representation of a double (%.17g round-trips).
std::string double_repr(double v);

/// Writes via a temporary file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

/// Cloud as CSV: '#'-prefixed metadata header (config hash, grid, delta,
/// sampling provenance), then one state per row.
std::string cloud_to_csv(const AttractorCloud& cloud,
                         std::uint64_t config_hash);
AttractorCloud cloud_from_csv(const std::string& text);

/// Envelope as JSON: amplitude knots, rate, inflation, floor.
std::string envelope_to_json(const KLEnvelope& env, std::uint64_t config_hash);
KLEnvelope envelope_from_json(const std::string& text);

/// Curve knots as CSV (r,value) with a name header.
std::string curve_to_csv(const MonotoneCurve& curve, const std::string& name,
                         std::uint64_t config_hash);

/// Trajectory CSV: t, norm, dist_theta (when a cloud is given), max_abs.
std::string trajectory_to_csv(const Trajectory& traj,
                              const AttractorCloud* cloud,
                              std::uint64_t config_hash);

std::string validation_to_json(const ValidationReport& rep,
                               std::uint64_t config_hash);

std::string certificate_to_json(const Certificate& cert,
                                std::uint64_t config_hash);

std::string report_to_json(const FalsificationReport& report,
                           std::uint64_t config_hash);

/// Per-sample margin table: sample, x0_dist, u_norm, margin, worst_time.
std::string margins_to_csv(const FalsificationReport& report,
                           std::uint64_t config_hash);

}  // namespace liss
