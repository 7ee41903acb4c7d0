#pragma once

#include <cstdint>
#include <cstdlib>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace polsec {

// Worker count from the POLSEC_WORKERS environment variable; absent or
// invalid means one worker (the serial path).
int env_worker_count();

// Number of fixed-size shards covering n items. The shard layout depends on
// n only, never on the worker count, so sharded reductions combine in the
// same order no matter how many threads run.
inline int shard_count(std::uint64_t n, std::uint64_t shard_size) {
  if (n == 0) return 0;
  return static_cast<int>((n - 1) / shard_size + 1);
}

// Runs body(shard) for each shard. workers <= 1 uses the plain serial loop,
// kept as the reference path; otherwise shards are distributed over an
// OpenMP team. body must depend only on its shard index.
template <class Body>
void run_shards(int shards, int workers, Body&& body) {
  if (workers <= 1) {
    for (int s = 0; s < shards; ++s) body(s);
    return;
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int s = 0; s < shards; ++s) body(s);
#else
  for (int s = 0; s < shards; ++s) body(s);
#endif
}

}  // namespace polsec
