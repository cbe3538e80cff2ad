#include "oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

#include "potd/errors.hpp"
#include "potd/ot.hpp"
#include "potd/rng.hpp"

namespace potd::cli {

namespace {

constexpr double kExactTolerance = 1e-9;
constexpr double kSinkhornGapBound = 0.01;
constexpr double kMonotoneSlack = 1e-12;

double enumerate_min(const Matrix& cost) {
  std::vector<Index> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Index i = 0; i < cost.rows(); ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(cost.rows());
}

}  // namespace

int run_oracle_check(const OracleCheckConfig& config, std::ostream& out) {
  if (config.size < 1 || config.size > kOracleMaxSize) {
    throw InvalidInputError("oracle size must lie in [1, " + std::to_string(kOracleMaxSize) +
                            "] (got " + std::to_string(config.size) + ")");
  }
  if (config.epsilons.empty() || config.instances < 1) {
    throw InvalidInputError("oracle check needs at least one epsilon and one instance");
  }
  for (const double eps : config.epsilons) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInputError("epsilon grid must be positive");
  }
  std::vector<double> grid = config.epsilons;
  std::sort(grid.begin(), grid.end(), std::greater<>());

  const Index n = config.size;
  const bool enumerate = n <= kEnumerationMaxSize;
  out << "oracle-check size=" << n << " instances=" << config.instances
      << " reference=" << (enumerate ? "enumeration" : "network-simplex") << '\n';
  out << std::left << std::setw(22) << "instance_seed" << std::setw(12) << "eps/max" << std::setw(16)
      << "gap" << "iterations\n";

  bool ok = true;
  for (int instance = 0; instance < config.instances; ++instance) {
    const std::uint64_t seed = mix_seed(config.seed, static_cast<std::uint64_t>(instance));
    Rng rng(seed);
    Matrix source(n, 2);
    Matrix target(n, 2);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < 2; ++j) source(i, j) = rng.uniform01();
      for (Index j = 0; j < 2; ++j) target(i, j) = rng.uniform01();
    }
    const auto mu = DiscreteMeasure::uniform(source);
    const auto nu = DiscreteMeasure::uniform(target);
    const Matrix cost = squared_euclidean_cost(source, target);

    const CouplingMatrix exact = exact_ot(mu, nu, cost);
    const double exact_cost = transport_cost(exact, cost);
    const double reference = enumerate ? enumerate_min(cost)
                                       : transport_cost(network_simplex_ot(mu, nu, cost), cost);
    if (std::abs(exact_cost - reference) > kExactTolerance) {
      out << "FAIL instance_seed=" << seed << ": exact cost " << exact_cost << " vs reference "
          << reference << '\n';
      ok = false;
    }
    if (exact.marginal_error > kExactTolerance) {
      out << "FAIL instance_seed=" << seed << ": exact marginal error " << exact.marginal_error
          << '\n';
      ok = false;
    }

    const double max_cost = cost.maxCoeff();
    double previous_gap = std::numeric_limits<double>::infinity();
    for (const double multiple : grid) {
      SolverConfig solver;
      solver.mode = SolverMode::kSinkhorn;
      solver.epsilon = multiple * max_cost;
      solver.max_iterations = 1'000'000;
      const CouplingMatrix plan = sinkhorn(mu, nu, cost, solver);
      const double gap = exact_cost > 0.0 ? (transport_cost(plan, cost) - exact_cost) / exact_cost
                                          : transport_cost(plan, cost);
      out << std::left << std::setw(22) << seed << std::setw(12) << multiple << std::setw(16)
          << gap << plan.iterations << '\n';
      if (plan.marginal_error > solver.marginal_tolerance) {
        out << "FAIL instance_seed=" << seed << ": sinkhorn marginal error " << plan.marginal_error
            << '\n';
        ok = false;
      }
      if (gap > previous_gap + kMonotoneSlack) {
        out << "FAIL instance_seed=" << seed << ": gap grew from " << previous_gap << " to " << gap
            << " as epsilon decreased\n";
        ok = false;
      }
      previous_gap = gap;
    }
    if (previous_gap > kSinkhornGapBound) {
      out << "FAIL instance_seed=" << seed << ": gap " << previous_gap
          << " at the smallest epsilon exceeds " << kSinkhornGapBound << '\n';
      ok = false;
    }
  }
  out << (ok ? "oracle-check: pass\n" : "oracle-check: FAIL\n");
  return ok ? 0 : 1;
}

}  // namespace potd::cli
