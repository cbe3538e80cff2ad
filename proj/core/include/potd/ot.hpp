#pragma once

#include <optional>
#include <vector>

#include "potd/types.hpp"

namespace potd {

/// A weighted point cloud: one row of `points` per atom, `weights` summing
/// to one. Construction validates every invariant.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Matrix points, Vector weights);

  /// Equal mass 1/n on every row of `points`.
  static DiscreteMeasure uniform(Matrix points);

  /// Rescales `weights` to unit L1 norm before constructing.
  static DiscreteMeasure normalized(Matrix points, Vector weights);

  const Matrix& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }

  /// True when all weights are equal (to 1e-15 relative).
  bool is_uniform() const;

 private:
  Matrix points_;
  Vector weights_;
};

enum class SolverMode {
  kAuto,  // exact when n*m <= kExactSizeLimit, Sinkhorn otherwise
  kExact,
  kSinkhorn,
};

inline constexpr double kExactSizeLimit = 250'000.0;

struct SolverConfig {
  SolverMode mode = SolverMode::kAuto;
  // Entropic regularization in cost units. Unset means 0.05 * median(cost).
  std::optional<double> epsilon;
  int max_iterations = 10'000;
  double marginal_tolerance = 1e-9;

  /// Throws InvalidInputError on a non-positive epsilon, tolerance or
  /// iteration budget.
  void validate() const;
};

/// Transport plan between two measures, with solver diagnostics.
struct CouplingMatrix {
  Matrix plan;
  Vector row_marginal;
  Vector col_marginal;
  SolverMode solved_by = SolverMode::kExact;
  int iterations = 0;
  double epsilon = 0.0;  // Sinkhorn only
  // max of the row and column L1 marginal errors of `plan`
  double marginal_error = 0.0;

  Index rows() const noexcept { return plan.rows(); }
  Index cols() const noexcept { return plan.cols(); }

  CouplingMatrix transposed() const;
};

/// Pairwise squared Euclidean distances, n x m.
Matrix squared_euclidean_cost(const Matrix& source, const Matrix& target);

/// Log-domain entropic OT. Deterministic; the returned plan meets both
/// marginals within `config.marginal_tolerance` (L1), otherwise a
/// ConvergenceError is thrown.
CouplingMatrix sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                        const SolverConfig& config);

/// Exact Kantorovich plan (a vertex of the transportation polytope).
/// Uniform equal-size measures use an assignment solver; everything else
/// goes through the network simplex.
CouplingMatrix exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost);

/// Network simplex on the transportation problem regardless of the weights.
/// exact_ot() dispatches here for non-uniform inputs; exposed so the two
/// exact paths can be cross-checked.
CouplingMatrix network_simplex_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const Matrix& cost);

/// Dispatch on config.mode (kAuto picks by problem size).
CouplingMatrix solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                        const SolverConfig& config);

/// G * target_points: row l is the coupling-weighted image of source atom l,
/// scaled by that atom's mass.
Matrix barycentric_projection(const CouplingMatrix& coupling, const Matrix& target_points);

/// Frobenius inner product <G, C>.
double transport_cost(const CouplingMatrix& coupling, const Matrix& cost);

/// Median of all cost entries; the scale used by the default epsilon.
double median_cost(const Matrix& cost);

/// Solves the square assignment problem min sum_i cost(i, perm[i]).
/// Returns perm. Exposed for oracle checks.
std::vector<Index> solve_assignment(const Matrix& cost);

}  // namespace potd
