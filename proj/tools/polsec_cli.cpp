// Command-line front end: experiment subcommands emitting CSV and SVG, plus
// the validate subcommand running the library invariant suite.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polsec/experiment.hpp"
#include "polsec/parallel.hpp"
#include "polsec/selfcheck.hpp"

namespace {

struct CliOptions {
  std::string scheme = "golden";
  int m = 8;
  double snr_start = 0.0;
  double snr_stop = 20.0;
  double snr_step = 5.0;
  std::uint64_t trials = 0;  // 0 -> per-subcommand default
  int block_bits = 64;
  double theta = 0.0;
  bool theta_band = false;
  int theta_steps = 8;
  double xi_re = 0.9;
  double xi_im = 0.0;
  int xi_steps = 10;
  std::string impairment = "cross";
  std::uint64_t seed = 1;
  std::string out;
  std::string plot;
};

polsec::Scheme parse_scheme(const std::string& name) {
  if (name == "golden") return polsec::Scheme::Golden;
  if (name == "rotation") return polsec::Scheme::Rotation;
  if (name == "opposite") return polsec::Scheme::Opposite;
  if (name == "none") return polsec::Scheme::None;
  throw CLI::ValidationError("--scheme", "expected golden, rotation, opposite or none");
}

// All experiment flags live on the root app so that a single key=value
// config file serves every subcommand; the subcommands pass unmatched flags
// up via fallthrough, and command-line values take precedence over the file.
void add_options(CLI::App& app, CliOptions& opt) {
  app.set_config("--config", "", "key=value config file; command-line flags win");
  app.add_option("--scheme", opt.scheme, "cipher scheme: golden|rotation|opposite|none");
  app.add_option("--m", opt.m, "constellation size (2, 4, 8, 16, 32)");
  app.add_option("--snr-start", opt.snr_start, "sweep start, dB");
  app.add_option("--snr-stop", opt.snr_stop, "sweep stop, dB");
  app.add_option("--snr-step", opt.snr_step, "sweep step, dB");
  app.add_option("--trials", opt.trials, "blocks / matrices / samples per point");
  app.add_option("--block-bits", opt.block_bits, "bits per block (padded to whole symbols)");
  app.add_option("--theta", opt.theta, "fixed rotation angle, radians");
  app.add_flag("--theta-band", opt.theta_band, "draw theta uniform in [pi/2, 3*pi/2]");
  app.add_option("--theta-steps", opt.theta_steps, "rotation-sweep grid size over [0, 2*pi)");
  app.add_option("--xi-re", opt.xi_re, "impairment grid endpoint, real part");
  app.add_option("--xi-im", opt.xi_im, "impairment grid endpoint, imaginary part");
  app.add_option("--xi-steps", opt.xi_steps, "impairment grid size");
  app.add_option("--impairment", opt.impairment, "imperfection model: cross|unbalanced");
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--out", opt.out, "CSV output path (default: stdout)");
  app.add_option("--plot", opt.plot, "SVG output path");
}

int run_command(const CLI::App& app, polsec::ExperimentKind kind, const CliOptions& opt,
                std::uint64_t default_trials) {
  polsec::ExperimentConfig cfg;
  cfg.kind = kind;
  if (app.count("--scheme")) {
    cfg.scheme = parse_scheme(opt.scheme);
  } else {
    cfg.scheme = kind == polsec::ExperimentKind::RotationSweep ? polsec::Scheme::Rotation
                                                               : parse_scheme(opt.scheme);
  }
  cfg.m = opt.m;
  cfg.snr_start_db = opt.snr_start;
  cfg.snr_stop_db = opt.snr_stop;
  cfg.snr_step_db = opt.snr_step;
  cfg.trials = opt.trials ? opt.trials : default_trials;
  cfg.block_bits = opt.block_bits;
  if (app.count("--theta")) cfg.theta = opt.theta;
  cfg.theta_band = opt.theta_band;
  cfg.theta_steps = opt.theta_steps;
  cfg.xi_re = opt.xi_re;
  cfg.xi_im = opt.xi_im;
  cfg.xi_steps = opt.xi_steps;
  if (opt.impairment == "cross") {
    cfg.impairment = polsec::Impairment::Kind::CrossPolarization;
  } else if (opt.impairment == "unbalanced") {
    cfg.impairment = polsec::Impairment::Kind::Unbalanced;
  } else {
    throw CLI::ValidationError("--impairment", "expected cross or unbalanced");
  }
  cfg.seed = opt.seed;
  cfg.out_path = opt.out;

  const auto records = polsec::run_experiment(cfg, polsec::env_worker_count());
  if (opt.out.empty()) {
    std::cout << polsec::csv_string(records);
  } else {
    polsec::emit_csv(records, opt.out);
  }
  if (!opt.plot.empty()) polsec::emit_plot(records, opt.plot);
  return 0;
}

int run_validate() {
  const auto results = polsec::run_selfcheck();
  int failures = 0;
  for (const auto& r : results) {
    if (r.ok) {
      std::printf("ok    %s\n", r.name.c_str());
    } else {
      ++failures;
      std::printf("FAIL  %s: %s\n", r.name.c_str(), r.detail.c_str());
    }
  }
  std::printf("%zu checks, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarization-domain physical-layer security simulator"};
  app.require_subcommand(1);

  CliOptions opt;
  add_options(app, opt);

  struct Command {
    const char* name;
    const char* description;
    polsec::ExperimentKind kind;
    std::uint64_t default_trials;
    CLI::App* sub = nullptr;
  };
  std::vector<Command> commands = {
      {"ber-sweep", "BER vs SNR for legitimate and eavesdropping receivers",
       polsec::ExperimentKind::BerSweep, 2000},
      {"rotation-sweep", "eavesdropper BER vs rotation angle",
       polsec::ExperimentKind::RotationSweep, 2000},
      {"q-metrics", "transformation metrics of random physical matrices",
       polsec::ExperimentKind::QVsTrace, 10000},
      {"stokes-stats", "detected Stokes moments vs prediction",
       polsec::ExperimentKind::StokesStats, 1000000},
      {"snr-transform", "Stokes-domain SNR vs prediction",
       polsec::ExperimentKind::SnrTransform, 500000},
      {"imperfection-sweep", "degradation vs impairment factor",
       polsec::ExperimentKind::ImperfectionSweep, 2000},
  };
  for (auto& cmd : commands) {
    cmd.sub = app.add_subcommand(cmd.name, cmd.description);
    cmd.sub->fallthrough();
  }
  CLI::App* validate = app.add_subcommand("validate", "run the full invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate();
    for (const auto& cmd : commands) {
      if (cmd.sub->parsed()) return run_command(app, cmd.kind, opt, cmd.default_trials);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
