#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polsec {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;  // empty when ok
};

// Invariant suite over all modules: conversion round trips, the commuting
// diagram, matrix identities, pattern properties, metric bounds, channel
// statistics and experiment determinism. Sample counts are sized to run in
// a few seconds.
std::vector<CheckResult> run_selfcheck(std::uint64_t seed = 0x5eedULL);

}  // namespace polsec
