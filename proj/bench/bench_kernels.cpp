// Times the Monte-Carlo kernels on the serial reference path and on the
// OpenMP path, and checks that both produce identical results.
//
//   polsec_bench [workers]   (default: hardware concurrency)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "polsec/channel.hpp"
#include "polsec/cipher.hpp"
#include "polsec/experiment.hpp"
#include "polsec/metrics.hpp"

using namespace polsec;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Kernel>
void bench(const char* name, int workers, Kernel&& kernel) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto serial = kernel(1);
  const double serial_s = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const auto parallel = kernel(workers);
  const double parallel_s = seconds_since(t1);

  const bool identical = serial == parallel;
  std::printf("%-28s serial %8.3f s   %2d workers %8.3f s   speedup %5.2fx   %s\n", name,
              serial_s, workers, parallel_s, serial_s / parallel_s,
              identical ? "results identical" : "RESULTS DIFFER");
  if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  int workers = argc > 1 ? std::atoi(argv[1])
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 2) workers = 2;

  const MuellerMatrix golden = golden_mueller({0.3, 1.0, -0.7, 0.4});
  bench("transformation MC (4e6)", workers, [&](int w) {
    const McEstimate est = amount_of_transformation_mc(golden, 4000000, 42, w);
    return std::pair(est.value, est.std_error);
  });

  bench("stokes moments (4e6)", workers, [&](int w) {
    const StokesMoments mom = measure_stokes_moments(0.5, 0.25, 4000000, 43, w);
    return std::pair(mom.mean, mom.variance);
  });

  bench("stokes SNR (4e6)", workers, [&](int w) {
    return Eigen::Vector4d(measure_stokes_snr(2.0, 4000000, 44, w));
  });

  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::BerSweep;
  cfg.scheme = Scheme::Golden;
  cfg.m = 8;
  cfg.snr_start_db = 10.0;
  cfg.snr_stop_db = 10.0;
  cfg.trials = 40000;
  cfg.seed = 45;
  bench("ber point (4e4 blocks)", workers, [&](int w) {
    return csv_string(run_experiment(cfg, w));
  });

  return 0;
}
