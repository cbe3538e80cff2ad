#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace potd::cli {

inline constexpr long kOracleMaxSize = 16;
inline constexpr long kEnumerationMaxSize = 8;

struct OracleCheckConfig {
  long size = 7;
  // Multiples of max(cost); the smallest one carries the 1% gap bound.
  std::vector<double> epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  int instances = 5;
  std::uint64_t seed = 42;
};

/// Runs the solver oracle suite on random uniform instances and prints the
/// Sinkhorn cost-gap table. Returns 0 when every check holds, 1 otherwise.
/// Sizes up to kEnumerationMaxSize are checked against brute-force
/// permutation enumeration, larger ones against the network simplex.
int run_oracle_check(const OracleCheckConfig& config, std::ostream& out);

}  // namespace potd::cli
