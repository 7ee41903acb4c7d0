#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "polsec/experiment.hpp"
#include "test_util.hpp"

using namespace polsec;

namespace {

ExperimentConfig small_ber_config() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::BerSweep;
  cfg.scheme = Scheme::Golden;
  cfg.m = 8;
  cfg.snr_start_db = 5.0;
  cfg.snr_stop_db = 15.0;
  cfg.snr_step_db = 5.0;
  cfg.trials = 60;
  cfg.seed = 404;
  return cfg;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("config validation messages") {
  ExperimentConfig cfg = small_ber_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_ber_config();
  cfg.m = 5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_ber_config();
  cfg.theta = 1.0;  // golden scheme: no rotation angle to set
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       "config: rotation angle options require scheme=rotation",
                       std::invalid_argument);

  cfg = small_ber_config();
  cfg.kind = ExperimentKind::RotationSweep;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // scheme still golden

  cfg = small_ber_config();
  cfg.kind = ExperimentKind::ImperfectionSweep;
  cfg.xi_re = 1.4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("ber sweep produces both receiver roles") {
  ExperimentConfig cfg = small_ber_config();
  const auto records = run_experiment(cfg);
  REQUIRE(records.size() == 6);  // 3 SNR points x 2 roles
  for (std::size_t i = 0; i < records.size(); i += 2) {
    CHECK(records[i].role == "legit");
    CHECK(records[i + 1].role == "eve");
    CHECK(records[i].bits == records[i + 1].bits);
    CHECK(records[i].ber ==
          doctest::Approx(static_cast<double>(records[i].errors) / records[i].bits));
  }

  // A noiseless point decodes cleanly for the legitimate receiver while the
  // eavesdropper still sees transformed symbols.
  cfg.snr_start_db = 120.0;
  cfg.snr_stop_db = 120.0;
  const auto quiet = run_experiment(cfg);
  REQUIRE(quiet.size() == 2);
  CHECK(quiet[0].ber == 0.0);
  CHECK(quiet[1].ber > 0.1);
}

TEST_CASE("experiment records are reproducible and worker-count invariant") {
  const ExperimentConfig cfg = small_ber_config();
  const auto serial = run_experiment(cfg, 1);
  CHECK(run_experiment(cfg, 1) == serial);
  CHECK(run_experiment(cfg, 3) == serial);
  CHECK(csv_string(run_experiment(cfg, 4)) == csv_string(serial));
}

TEST_CASE("q_vs_trace records stay inside their bounds") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::QVsTrace;
  cfg.trials = 400;
  cfg.seed = 7;
  const auto records = run_experiment(cfg, 2);
  REQUIRE(records.size() == 400);
  for (const auto& r : records) {
    REQUIRE(r.aux.size() == 3);
    const double q = r.aux[0].second, lo = r.aux[1].second, hi = r.aux[2].second;
    CHECK(q >= lo - 1e-9);
    CHECK(q <= hi + 1e-9);
    CHECK(q <= 64.0 * M_PI + 1e-9);
  }
}

TEST_CASE("csv output format") {
  CHECK(csv_string({}) == "experiment,scheme,m,snr_db,parameter,role,errors,bits,ber\n");

  ResultRecord rec;
  rec.experiment = "ber_sweep";
  rec.scheme = "golden";
  rec.m = 8;
  rec.snr_db = 2.5;
  rec.parameter = 2.5;
  rec.role = "legit";
  rec.errors = 3;
  rec.bits = 1200;
  rec.ber = 0.0025;
  rec.aux.emplace_back("ber_sigma", 0.25);

  const std::string text = csv_string({rec});
  CHECK(text ==
        "experiment,scheme,m,snr_db,parameter,role,errors,bits,ber,aux1_name,aux1\n"
        "ber_sweep,golden,8,2.5,2.5,legit,3,1200,0.0025000000000000001,ber_sigma,0.25\n");
  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == rec);
}

TEST_CASE("csv round trip via files") {
  ExperimentConfig cfg = small_ber_config();
  cfg.trials = 25;
  const auto records = run_experiment(cfg);
  const std::string path = "/tmp/polsec_test_records.csv";
  emit_csv(records, path);
  CHECK(read_csv(path) == records);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_csv(path), std::runtime_error);
  CHECK_THROWS_AS(emit_csv(records, "/nonexistent_dir/x.csv"), std::runtime_error);
}

TEST_CASE("csv keeps full double precision") {
  ResultRecord rec;
  rec.experiment = "q_vs_trace";
  rec.scheme = "none";
  rec.role = "none";
  rec.parameter = M_PI;
  rec.aux.emplace_back("q", 32.0 * M_PI / 3.0);
  const auto parsed = parse_csv(csv_string({rec}));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].parameter == M_PI);
  CHECK(parsed[0].aux[0].second == 32.0 * M_PI / 3.0);
}

TEST_CASE("plot rendering and error paths") {
  ExperimentConfig cfg = small_ber_config();
  cfg.trials = 25;
  const auto records = run_experiment(cfg);
  const std::string svg = plot_svg(records);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("golden legit") != std::string::npos);
  CHECK(svg.find("golden eve") != std::string::npos);

  const std::string path = "/tmp/polsec_test_plot.svg";
  emit_plot(records, path);
  CHECK(file_exists(path));
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_plot({}, path), std::invalid_argument);
  CHECK_FALSE(file_exists(path));

  auto mixed = records;
  mixed.push_back(records.front());
  mixed.back().experiment = "stokes_stats";
  CHECK_THROWS_AS(emit_plot(mixed, path), std::invalid_argument);
  CHECK_FALSE(file_exists(path));
}

TEST_CASE("stokes statistics experiment compares against predictions") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::StokesStats;
  cfg.snr_start_db = -10.0;
  cfg.snr_stop_db = 10.0;
  cfg.snr_step_db = 10.0;
  cfg.trials = 200000;
  cfg.seed = 5;
  const auto records = run_experiment(cfg, 2);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    double meas = 0.0, pred = 0.0;
    for (const auto& [name, value] : r.aux) {
      if (name == "var0_meas") meas = value;
      if (name == "var0_pred") pred = value;
    }
    CHECK(meas == doctest::Approx(pred).epsilon(0.03));
  }
}
