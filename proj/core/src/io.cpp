#include "liss/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "liss/errors.hpp"

namespace liss {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string double_repr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void atomic_write(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) { return fs::exists(path); }

std::string cloud_to_csv(const AttractorCloud& cloud,
                         std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# liss attractor cloud\n";
  out << "# config_hash " << hash_hex(config_hash) << "\n";
  out << "# L " << double_repr(cloud.grid.length) << "\n";
  out << "# n " << cloud.grid.interior_count << "\n";
  out << "# delta " << double_repr(cloud.resolution) << "\n";
  out << "# burn_in " << double_repr(cloud.burn_in) << "\n";
  out << "# snapshot_interval " << double_repr(cloud.snapshot_interval)
      << "\n";
  out << "# ensemble " << cloud.ensemble << "\n";
  out << "# radius " << double_repr(cloud.radius) << "\n";
  out << "# seed " << cloud.seed << "\n";
  out << "# generations " << cloud.generations_used << "\n";
  for (const auto& p : cloud.points) {
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      if (i) out << ",";
      out << double_repr(p.values[i]);
    }
    out << "\n";
  }
  return out.str();
}

AttractorCloud cloud_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  AttractorCloud cloud;
  double L = 0.0;
  int n = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string key;
      hdr >> key;
      if (key == "L") hdr >> L;
      else if (key == "n") hdr >> n;
      else if (key == "delta") hdr >> cloud.resolution;
      else if (key == "burn_in") hdr >> cloud.burn_in;
      else if (key == "snapshot_interval") hdr >> cloud.snapshot_interval;
      else if (key == "ensemble") hdr >> cloud.ensemble;
      else if (key == "radius") hdr >> cloud.radius;
      else if (key == "seed") hdr >> cloud.seed;
      else if (key == "generations") hdr >> cloud.generations_used;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (!(L > 0.0) || n < 1 || rows.empty())
    throw Error("cloud file is malformed or empty");
  cloud.grid = Grid::make(L, n);
  for (auto& row : rows)
    cloud.points.push_back(StateVector::from_values(cloud.grid, std::move(row)));
  return cloud;
}

namespace {

json knots_to_json(const MonotoneCurve& c) {
  json arr = json::array();
  for (const auto& k : c.knots()) arr.push_back({k.r, k.value});
  return arr;
}

MonotoneCurve knots_from_json(const json& arr) {
  std::vector<MonotoneCurve::Knot> knots;
  for (const auto& e : arr) knots.push_back({e[0].get<double>(), e[1].get<double>()});
  return MonotoneCurve::make(std::move(knots));
}

}  // namespace

std::string envelope_to_json(const KLEnvelope& env,
                             std::uint64_t config_hash) {
  json j;
  j["kind"] = "kl_envelope";
  j["config_hash"] = hash_hex(config_hash);
  j["amplitude_knots"] = knots_to_json(env.amplitude);
  j["rate"] = env.rate;
  j["inflation"] = env.inflation;
  j["floor"] = env.floor;
  j["degenerate"] = env.degenerate;
  return j.dump(2);
}

KLEnvelope envelope_from_json(const std::string& text) {
  json j = json::parse(text);
  KLEnvelope env;
  env.amplitude = knots_from_json(j.at("amplitude_knots"));
  env.rate = j.at("rate").get<double>();
  env.inflation = j.at("inflation").get<double>();
  env.floor = j.at("floor").get<double>();
  env.degenerate = j.at("degenerate").get<bool>();
  return env;
}

std::string curve_to_csv(const MonotoneCurve& curve, const std::string& name,
                         std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# liss curve " << name << "\n";
  out << "# config_hash " << hash_hex(config_hash) << "\n";
  out << "r,value\n";
  for (const auto& k : curve.knots())
    out << double_repr(k.r) << "," << double_repr(k.value) << "\n";
  return out.str();
}

std::string trajectory_to_csv(const Trajectory& traj,
                              const AttractorCloud* cloud,
                              std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# liss trajectory\n";
  out << "# config_hash " << hash_hex(config_hash) << "\n";
  out << (cloud ? "t,norm,dist_theta,max_abs\n" : "t,norm,max_abs\n");
  std::size_t hint = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << double_repr(traj.times[i]) << "," << double_repr(traj.norms[i]);
    if (cloud)
      out << ","
          << double_repr(
                 dist_to_attractor_hinted(traj.states[i].values, *cloud, hint));
    out << "," << double_repr(max_abs(traj.states[i])) << "\n";
  }
  return out.str();
}

std::string validation_to_json(const ValidationReport& rep,
                               std::uint64_t config_hash) {
  json j;
  j["kind"] = "condition_validation";
  j["config_hash"] = hash_hex(config_hash);
  j["pass"] = rep.pass;
  j["lower_ok"] = rep.lower_ok;
  j["upper_ok"] = rep.upper_ok;
  j["derivative_ok"] = rep.derivative_ok;
  j["min_slack_lower"] = rep.min_slack_lower;
  j["min_slack_upper"] = rep.min_slack_upper;
  j["min_slack_derivative"] = rep.min_slack_derivative;
  j["argmin_lower"] = rep.argmin_lower;
  j["argmin_upper"] = rep.argmin_upper;
  j["argmin_derivative"] = rep.argmin_derivative;
  j["r_max"] = rep.r_max;
  j["n_samples"] = rep.n_samples;
  return j.dump(2);
}

std::string certificate_to_json(const Certificate& cert,
                                std::uint64_t config_hash) {
  json j;
  j["kind"] = "liss_certificate";
  j["config_hash"] = hash_hex(config_hash);
  j["r0"] = cert.r0;
  j["r0x"] = cert.r0x;
  j["r0u"] = cert.r0u;
  j["tolerance"] = cert.tolerance;
  j["cloud_resolution"] = cert.cloud_resolution;
  j["seed"] = cert.seed;
  j["psi_lower_knots"] = knots_to_json(cert.bg.psi_lower());
  j["psi_upper_knots"] = knots_to_json(cert.bg.psi_upper());
  j["chi_knots"] = knots_to_json(cert.bg.chi());
  j["decay_curve_knots"] = knots_to_json(cert.bg.decay_curve());
  j["gamma_knots"] = knots_to_json(cert.bg.gamma());
  return j.dump(2);
}

namespace {

json outcome_to_json(const SampleOutcome& o, bool with_replay_data) {
  json j;
  j["sample"] = o.sample;
  j["x0_dist"] = o.x0_dist;
  j["u_norm"] = o.u_norm;
  j["margin"] = o.margin;
  j["worst_time"] = o.worst_time;
  j["max_dist"] = o.max_dist;
  if (with_replay_data) {
    j["x0_values"] = o.x0_values;
    j["u_breakpoints"] = o.u_breakpoints;
    j["u_values"] = o.u_values;
  }
  return j;
}

}  // namespace

std::string report_to_json(const FalsificationReport& report,
                           std::uint64_t config_hash) {
  json j;
  j["kind"] = "falsification_report";
  j["config_hash"] = hash_hex(config_hash);
  j["samples"] = report.samples;
  j["tolerance"] = report.tolerance;
  j["horizon"] = report.horizon;
  j["min_margin"] = report.min_margin;
  j["max_amplitude_observed"] = report.max_amplitude_observed;
  j["seed"] = report.seed;
  j["passed"] = report.passed;
  j["violation_count"] = report.violations.size();
  json outs = json::array();
  for (const auto& o : report.outcomes) outs.push_back(outcome_to_json(o, false));
  j["outcomes"] = outs;
  json viols = json::array();
  for (const auto& o : report.violations) viols.push_back(outcome_to_json(o, true));
  j["violations"] = viols;
  j["mu"] = {{"samples", report.mu.samples},
             {"threshold", report.mu.threshold},
             {"max_excess", report.mu.max_excess},
             {"containment_bound", report.mu.containment_bound},
             {"max_initial_dist", report.mu.max_initial_dist},
             {"violations", report.mu.violations},
             {"stayed_in_ball", report.mu.stayed_in_ball},
             {"sampling_degenerate", report.mu.sampling_degenerate}};
  return j.dump(2);
}

std::string margins_to_csv(const FalsificationReport& report,
                           std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# liss margins\n";
  out << "# config_hash " << hash_hex(config_hash) << "\n";
  out << "sample,x0_dist,u_norm,margin,worst_time,max_dist\n";
  for (const auto& o : report.outcomes)
    out << o.sample << "," << double_repr(o.x0_dist) << ","
        << double_repr(o.u_norm) << "," << double_repr(o.margin) << ","
        << double_repr(o.worst_time) << "," << double_repr(o.max_dist) << "\n";
  return out.str();
}

}  // namespace liss
