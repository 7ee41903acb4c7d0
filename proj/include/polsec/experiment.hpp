#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polsec/channel.hpp"
#include "polsec/parallel.hpp"

namespace polsec {

enum class ExperimentKind {
  BerSweep,           // BER vs SNR, legitimate and eavesdropper
  RotationSweep,      // eavesdropper BER vs rotation angle at fixed SNR
  QVsTrace,           // transformation metrics of random physical matrices
  StokesStats,        // detected Stokes moments vs prediction
  SnrTransform,       // per-parameter SNR after detection vs prediction
  ImperfectionSweep,  // degradation vs impairment factor at fixed SNR
};

enum class Scheme { Golden, Rotation, Opposite, None };

const char* to_string(ExperimentKind kind);
const char* to_string(Scheme scheme);

// Full description of one experiment run. Trials are blocks for BER-style
// kinds, matrices for QVsTrace and samples for the statistics kinds.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::BerSweep;
  Scheme scheme = Scheme::Golden;
  int m = 8;
  double snr_start_db = 0.0;
  double snr_stop_db = 20.0;
  double snr_step_db = 5.0;
  std::uint64_t trials = 1000;
  int block_bits = 64;
  std::optional<double> theta;  // fixed rotation angle
  bool theta_band = false;      // draw theta uniform in [pi/2, 3*pi/2] per trial
  double theta_start = 0.0;
  double theta_stop = 2.0 * 3.14159265358979323846;
  int theta_steps = 8;  // grid theta_k = start + k*(stop-start)/steps, k < steps
  double xi_re = 0.9;
  double xi_im = 0.0;
  int xi_steps = 10;  // grid xi_k = (xi_re + j xi_im) * k/(steps-1)
  Impairment::Kind impairment = Impairment::Kind::CrossPolarization;
  std::uint64_t seed = 1;
  std::string out_path;

  // Throws std::invalid_argument with a message for inconsistent settings
  // (empty grids, zero trials, rotation angles for a non-rotation scheme...).
  void validate() const;
};

// One output row. ber = errors/bits; aux carries named side figures
// (confidence intervals, metrics, predictions).
struct ResultRecord {
  std::string experiment;
  std::string scheme;
  int m = 0;
  double snr_db = 0.0;
  double parameter = 0.0;
  std::string role;  // legit | eve | none
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
  double ber = 0.0;
  std::vector<std::pair<std::string, double>> aux;

  bool operator==(const ResultRecord&) const = default;
};

// Runs the experiment. Deterministic for a fixed config and seed: per-trial
// streams derive from (seed, point, trial) and partial sums combine in a
// fixed shard order, so the records are identical for any worker count.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, int workers = 1);

// CSV with the fixed column set
//   experiment,scheme,m,snr_db,parameter,role,errors,bits,ber,aux1_name,aux1,...
// reals printed with 17 significant digits, UTF-8, LF line endings.
std::string csv_string(const std::vector<ResultRecord>& records);
void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::vector<ResultRecord> read_csv(const std::string& path);
std::vector<ResultRecord> parse_csv(const std::string& text);

// Static SVG rendering of one experiment's records: one curve per
// scheme/role, logarithmic BER axis for the sweep kinds. Throws
// std::invalid_argument for an empty list or records of mixed kinds;
// nothing is written in either case.
std::string plot_svg(const std::vector<ResultRecord>& records);
void emit_plot(const std::vector<ResultRecord>& records, const std::string& path);

}  // namespace polsec
