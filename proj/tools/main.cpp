// Command-line front end: composes the pipeline stages into reproducible
// experiments driven by a single JSON config.
//
// Exit codes: 0 success/pass, 1 violation/fail, 2 usage or config error,
// 3 numerical error (blow-up, non-convergence).

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "liss/config.hpp"
#include "liss/errors.hpp"
#include "liss/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  unsigned threads = 1;
};

liss::ExperimentConfig prepare(const CommonArgs& args) {
  liss::ExperimentConfig cfg = liss::load_config(args.config_path);
  if (!args.out_override.empty()) cfg.output_dir = args.out_override;
  if (args.seed_override) liss::apply_seed_override(cfg, *args.seed_override);
  liss::apply_thread_override(cfg, args.threads);
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--out", args.out_override, "output directory override");
  cmd->add_option("--seed", args.seed_override,
                  "root seed override (re-derives all stage seeds)");
  cmd->add_option("--threads", args.threads, "worker threads")
      ->default_val(1u);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liss: stability laboratory for disturbed reaction-diffusion "
               "systems relative to the attractor of the undisturbed flow"};
  app.require_subcommand(1);

  CommonArgs args;
  bool pipeline_flag = false;

  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate one trajectory, write CSV");
  add_common(simulate, args);
  CLI::App* attractor = app.add_subcommand(
      "attractor", "approximate the attractor and fit the decay envelope");
  add_common(attractor, args);
  CLI::App* lyapunov = app.add_subcommand(
      "lyapunov", "construct the Lyapunov data and dump the curves");
  add_common(lyapunov, args);
  CLI::App* certify = app.add_subcommand(
      "certify", "build the stability certificate and falsification-test it");
  add_common(certify, args);
  certify->add_flag("--pipeline", pipeline_flag,
                    "build missing upstream artifacts instead of failing");
  CLI::App* validate = app.add_subcommand(
      "validate", "check the growth/derivative conditions of the reaction");
  add_common(validate, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? liss::kExitOk : liss::kExitConfig;
  }

  try {
    const liss::ExperimentConfig cfg = prepare(args);
    if (simulate->parsed()) return liss::cmd_simulate(cfg);
    if (attractor->parsed()) return liss::cmd_attractor(cfg);
    if (lyapunov->parsed()) return liss::cmd_lyapunov(cfg);
    if (certify->parsed()) return liss::cmd_certify(cfg, pipeline_flag);
    if (validate->parsed()) return liss::cmd_validate(cfg);
    std::fprintf(stderr, "no subcommand\n");
    return liss::kExitConfig;
  } catch (const liss::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return liss::kExitConfig;
  } catch (const liss::BlowUpError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return liss::kExitNumerics;
  } catch (const liss::NumericsError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return liss::kExitNumerics;
  } catch (const liss::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return liss::kExitConfig;
  }
}
