#include "potd/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "potd/errors.hpp"

namespace potd {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kFeasibilityTolerance = 1e-9;
constexpr double kSinkhornScalingStep = 0.5;
constexpr double kSinkhornScalingFactor = 2.0;
constexpr double kSinkhornStageTolerance = 1e-4;
// Plain sweeps per stage before Newton steps are interleaved.
constexpr int kSinkhornNewtonAfter = 100;

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + " contains non-finite entries");
  }
}

void require_matching(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost) {
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    std::ostringstream os;
    os << "cost matrix is " << cost.rows() << "x" << cost.cols() << " but measures have sizes "
       << mu.size() << " and " << nu.size();
    throw InvalidInputError(os.str());
  }
  require_finite(cost, "cost matrix");
}

double marginal_l1_error(const Matrix& plan, const Vector& rows, const Vector& cols) {
  const double row_err = (plan.rowwise().sum() - rows).lpNorm<1>();
  const double col_err = (plan.colwise().sum().transpose() - cols).lpNorm<1>();
  return std::max(row_err, col_err);
}

CouplingMatrix make_coupling(Matrix plan, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             SolverMode mode) {
  CouplingMatrix out;
  out.plan = std::move(plan);
  out.row_marginal = mu.weights();
  out.col_marginal = nu.weights();
  out.solved_by = mode;
  out.marginal_error = marginal_l1_error(out.plan, out.row_marginal, out.col_marginal);
  return out;
}

// Numerically stable log(sum(exp(v))) over a strided set of values.
template <typename Values>
double log_sum_exp(const Values& v) {
  const double hi = v.maxCoeff();
  if (!std::isfinite(hi)) return hi;
  return hi + std::log((v.array() - hi).exp().sum());
}

// Damped Newton step on the entropic dual, for when plain Sinkhorn sweeps
// stall. With P = exp(S + f 1' + 1 g') the marginal residual r = (P1 - a,
// P'1 - b) has Jacobian J = [diag(P1) P; P' diag(P'1)], symmetric PSD with
// the null direction (1, -1). J d = -r is solved by Jacobi-preconditioned
// CG and the step is halved until ||r|| decreases. Returns false when no
// step helps.
bool sinkhorn_newton_step(const Matrix& scaled, const Vector& a, const Vector& b, Vector& f,
                          Vector& g) {
  const Index n = f.size();
  const Index m = g.size();
  auto residual = [&](const Vector& fv, const Vector& gv, Matrix& P, Vector& r) {
    P = ((scaled.colwise() + fv).rowwise() + gv.transpose()).array().exp().matrix();
    r.resize(n + m);
    r.head(n) = P.rowwise().sum() - a;
    r.tail(m) = P.colwise().sum().transpose() - b;
  };
  Matrix P;
  Vector r;
  residual(f, g, P, r);
  const double r_norm = r.norm();
  if (!(r_norm > 0.0)) return false;

  const Vector rows = r.head(n) + a;
  const Vector cols = r.tail(m) + b;
  const double tau = 1e-14 * std::max(rows.maxCoeff(), cols.maxCoeff());
  auto apply = [&](const Vector& x) {
    Vector y(n + m);
    y.head(n) = rows.cwiseProduct(x.head(n)) + P * x.tail(m);
    y.tail(m) = P.transpose() * x.head(n) + cols.cwiseProduct(x.tail(m));
    return Vector(y + tau * x);
  };
  Vector diag(n + m);
  diag << rows, cols;
  diag.array() += tau;

  // Inexact Newton: the forcing term shrinks with the residual.
  const double target = std::min(0.1, r_norm) * r_norm;
  Vector d = Vector::Zero(n + m);
  Vector res = -r;
  Vector z = res.cwiseQuotient(diag);
  Vector q = z;
  double rz = res.dot(z);
  for (Index it = 0; it < 4 * (n + m) && res.norm() > target; ++it) {
    const Vector Aq = apply(q);
    const double curvature = q.dot(Aq);
    if (!(curvature > 0.0)) break;
    const double alpha = rz / curvature;
    d += alpha * q;
    res -= alpha * Aq;
    z = res.cwiseQuotient(diag);
    const double rz_next = res.dot(z);
    q = z + (rz_next / rz) * q;
    rz = rz_next;
  }
  if (!d.allFinite()) return false;

  Matrix P_trial;
  Vector r_trial;
  for (double t = 1.0; t > 1e-6; t *= 0.5) {
    const Vector f_trial = f + t * d.head(n);
    const Vector g_trial = g + t * d.tail(m);
    residual(f_trial, g_trial, P_trial, r_trial);
    if (r_trial.allFinite() && r_trial.norm() < r_norm) {
      f = f_trial;
      g = g_trial;
      return true;
    }
  }
  return false;
}

// Network simplex for the balanced transportation problem.
//
// Nodes 0..n-1 are sources, n..n+m-1 sinks, n+m an artificial root. Arc
// e < n*m joins source e/m to sink n + e%m; the remaining arcs connect each
// node to the root with a prohibitive cost. The spanning tree is kept
// strongly feasible (zero-flow tree arcs point away from the root), which
// rules out cycling under degeneracy.
class TransportSimplex {
 public:
  TransportSimplex(const Vector& supply, const Vector& demand, const Matrix& cost)
      : n_(supply.size()),
        m_(demand.size()),
        node_count_(n_ + m_ + 1),
        root_(n_ + m_),
        real_arcs_(n_ * m_),
        arc_count_(real_arcs_ + n_ + m_) {
    max_cost_ = cost.size() > 0 ? cost.maxCoeff() : 0.0;
    artificial_cost_ = (max_cost_ + 1.0) * static_cast<double>(node_count_);
    tolerance_ = 1e-11 * max_cost_;

    source_.resize(arc_count_);
    target_.resize(arc_count_);
    arc_cost_.resize(arc_count_);
    flow_.assign(arc_count_, 0.0);
    in_tree_.assign(arc_count_, false);
    balance_.resize(node_count_, 0.0);

    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < m_; ++j) {
        const Index e = i * m_ + j;
        source_[e] = i;
        target_[e] = n_ + j;
        arc_cost_[e] = cost(i, j);
      }
    }
    for (Index i = 0; i < n_; ++i) balance_[i] = supply(i);
    for (Index j = 0; j < m_; ++j) balance_[n_ + j] = -demand(j);

    adjacency_.assign(node_count_, {});
    for (Index v = 0; v < n_ + m_; ++v) {
      const Index e = real_arcs_ + v;
      arc_cost_[e] = artificial_cost_;
      if (balance_[v] > 0.0) {
        source_[e] = v;
        target_[e] = root_;
        flow_[e] = balance_[v];
      } else {
        source_[e] = root_;
        target_[e] = v;
        flow_[e] = -balance_[v];
      }
      in_tree_[e] = true;
      adjacency_[v].push_back(e);
      adjacency_[root_].push_back(e);
    }

    parent_.assign(node_count_, -1);
    pred_arc_.assign(node_count_, -1);
    pred_up_.assign(node_count_, false);
    depth_.assign(node_count_, 0);
    potential_.assign(node_count_, 0.0);
    top_.assign(node_count_, root_);
    offset_.assign(node_count_, 0.0);
    order_.reserve(node_count_);
    block_size_ = std::max<Index>(10, static_cast<Index>(std::sqrt(static_cast<double>(arc_count_))));
  }

  void solve() {
    rebuild_tree();
    while (true) {
      const Index entering = find_entering_arc();
      if (entering < 0) break;
      pivot(entering);
      ++pivots_;
    }
    recompute_flows();
  }

  Matrix plan() const {
    Matrix out(n_, m_);
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < m_; ++j) out(i, j) = std::max(0.0, flow_[i * m_ + j]);
    }
    return out;
  }

  int pivots() const { return pivots_; }

 private:
  // Potentials are stored relative to the root child heading each subtree,
  // so the artificial cost only enters for arcs joining two subtrees and
  // cancels exactly otherwise.
  double reduced_cost(Index e) const {
    const Index s = source_[e];
    const Index t = target_[e];
    double rc = arc_cost_[e] + potential_[s] - potential_[t];
    if (top_[s] != top_[t]) rc += offset_[top_[s]] - offset_[top_[t]];
    return rc;
  }

  // Block search pricing: scan arcs in blocks starting where the last scan
  // stopped and take the most negative reduced cost of the first block that
  // has one.
  Index find_entering_arc() {
    Index best = -1;
    double best_rc = -tolerance_;
    Index scanned_in_block = 0;
    for (Index step = 0; step < arc_count_; ++step) {
      const Index e = next_arc_;
      next_arc_ = (next_arc_ + 1 == arc_count_) ? 0 : next_arc_ + 1;
      if (!in_tree_[e]) {
        const double rc = reduced_cost(e);
        if (rc < best_rc) {
          best_rc = rc;
          best = e;
        }
      }
      if (++scanned_in_block == block_size_) {
        if (best >= 0) return best;
        scanned_in_block = 0;
      }
    }
    return best;
  }

  void pivot(Index entering) {
    const Index first = source_[entering];
    const Index second = target_[entering];

    Index a = first;
    Index b = second;
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
      a = parent_[a];
      b = parent_[b];
    }
    const Index join = a;

    // Flow is pushed join -> ... -> first -> second -> ... -> join. The
    // leaving arc is the last blocking arc met in that order.
    double delta = std::numeric_limits<double>::infinity();
    Index leaving_node = -1;
    for (Index x = first; x != join; x = parent_[x]) {
      if (pred_up_[x] && flow_[pred_arc_[x]] < delta) {
        delta = flow_[pred_arc_[x]];
        leaving_node = x;
      }
    }
    for (Index x = second; x != join; x = parent_[x]) {
      if (!pred_up_[x] && flow_[pred_arc_[x]] <= delta) {
        delta = flow_[pred_arc_[x]];
        leaving_node = x;
      }
    }
    if (leaving_node < 0) {
      throw NumericError("network simplex found an unbounded cycle");
    }
    delta = std::max(0.0, delta);

    if (delta > 0.0) {
      flow_[entering] += delta;
      for (Index x = first; x != join; x = parent_[x]) {
        flow_[pred_arc_[x]] += pred_up_[x] ? -delta : delta;
      }
      for (Index x = second; x != join; x = parent_[x]) {
        flow_[pred_arc_[x]] += pred_up_[x] ? delta : -delta;
      }
    }

    const Index leaving = pred_arc_[leaving_node];
    flow_[leaving] = 0.0;
    in_tree_[leaving] = false;
    erase_adjacent(source_[leaving], leaving);
    erase_adjacent(target_[leaving], leaving);
    in_tree_[entering] = true;
    adjacency_[first].push_back(entering);
    adjacency_[second].push_back(entering);
    rebuild_tree();
  }

  void erase_adjacent(Index node, Index arc) {
    auto& list = adjacency_[node];
    auto it = std::find(list.begin(), list.end(), arc);
    *it = list.back();
    list.pop_back();
  }

  // Depth-first traversal from the root; refreshes parent pointers, depths
  // and potentials (reduced cost zero on every tree arc).
  void rebuild_tree() {
    order_.clear();
    stack_.clear();
    parent_[root_] = -1;
    pred_arc_[root_] = -1;
    depth_[root_] = 0;
    potential_[root_] = 0.0;
    top_[root_] = root_;
    offset_[root_] = 0.0;
    stack_.push_back(root_);
    while (!stack_.empty()) {
      const Index v = stack_.back();
      stack_.pop_back();
      order_.push_back(v);
      for (const Index e : adjacency_[v]) {
        if (e == pred_arc_[v]) continue;
        const bool up = target_[e] == v;  // arc points from child to v
        const Index child = up ? source_[e] : target_[e];
        parent_[child] = v;
        pred_arc_[child] = e;
        pred_up_[child] = up;
        depth_[child] = depth_[v] + 1;
        if (v == root_) {
          top_[child] = child;
          offset_[child] = up ? -arc_cost_[e] : arc_cost_[e];
          potential_[child] = 0.0;
        } else {
          top_[child] = top_[v];
          potential_[child] = up ? potential_[v] - arc_cost_[e] : potential_[v] + arc_cost_[e];
        }
        stack_.push_back(child);
      }
    }
  }

  // Tree flows are fully determined by the node balances; recomputing them
  // removes round-off accumulated over the pivots.
  void recompute_flows() {
    std::vector<double> subtree(balance_);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const Index v = *it;
      if (v == root_) continue;
      const Index e = pred_arc_[v];
      flow_[e] = pred_up_[v] ? subtree[v] : -subtree[v];
      subtree[parent_[v]] += subtree[v];
    }
    for (Index e = 0; e < arc_count_; ++e) {
      if (!in_tree_[e]) flow_[e] = 0.0;
    }
  }

  Index n_;
  Index m_;
  Index node_count_;
  Index root_;
  Index real_arcs_;
  Index arc_count_;
  double max_cost_ = 0.0;
  double artificial_cost_ = 0.0;
  double tolerance_ = 0.0;

  std::vector<Index> source_;
  std::vector<Index> target_;
  std::vector<double> arc_cost_;
  std::vector<double> flow_;
  std::vector<bool> in_tree_;
  std::vector<double> balance_;
  std::vector<std::vector<Index>> adjacency_;

  std::vector<Index> parent_;
  std::vector<Index> pred_arc_;
  std::vector<bool> pred_up_;
  std::vector<Index> depth_;
  std::vector<double> potential_;
  std::vector<Index> top_;
  std::vector<double> offset_;
  std::vector<Index> order_;
  std::vector<Index> stack_;

  Index next_arc_ = 0;
  Index block_size_ = 10;
  int pivots_ = 0;
};

}  // namespace

DiscreteMeasure::DiscreteMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1) throw InvalidInputError("a discrete measure needs at least one point");
  if (weights_.size() != points_.rows()) {
    std::ostringstream os;
    os << "measure has " << points_.rows() << " points but " << weights_.size() << " weights";
    throw InvalidInputError(os.str());
  }
  require_finite(points_, "measure points");
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw InvalidInputError("measure weights must be finite and nonnegative");
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "measure weights sum to " << total << ", expected 1";
    throw InvalidInputError(os.str());
  }
}

DiscreteMeasure DiscreteMeasure::uniform(Matrix points) {
  const Index n = points.rows();
  if (n < 1) throw InvalidInputError("a discrete measure needs at least one point");
  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(std::move(points), std::move(w));
}

DiscreteMeasure DiscreteMeasure::normalized(Matrix points, Vector weights) {
  const double total = weights.lpNorm<1>();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidInputError("measure weights must have a positive finite L1 norm");
  }
  weights /= total;
  return DiscreteMeasure(std::move(points), std::move(weights));
}

bool DiscreteMeasure::is_uniform() const {
  const double first = weights_(0);
  return ((weights_.array() - first).abs() <= 1e-15 * first).all();
}

void SolverConfig::validate() const {
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
    throw InvalidInputError("sinkhorn epsilon must be positive and finite");
  }
  if (!(marginal_tolerance > 0.0)) throw InvalidInputError("marginal tolerance must be positive");
  if (max_iterations < 1) throw InvalidInputError("max_iterations must be positive");
}

CouplingMatrix CouplingMatrix::transposed() const {
  CouplingMatrix out = *this;
  out.plan = plan.transpose();
  std::swap(out.row_marginal, out.col_marginal);
  return out;
}

Matrix squared_euclidean_cost(const Matrix& source, const Matrix& target) {
  if (source.cols() != target.cols()) {
    std::ostringstream os;
    os << "point dimension mismatch: " << source.cols() << " vs " << target.cols();
    throw InvalidInputError(os.str());
  }
  require_finite(source, "source points");
  require_finite(target, "target points");
  Matrix cost(source.rows(), target.rows());
  for (Index j = 0; j < target.rows(); ++j) {
    cost.col(j) = (source.rowwise() - target.row(j)).rowwise().squaredNorm();
  }
  return cost;
}

double median_cost(const Matrix& cost) {
  if (cost.size() == 0) throw InvalidInputError("empty cost matrix");
  std::vector<double> values(cost.data(), cost.data() + cost.size());
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  double median = *mid;
  if (values.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(values.begin(), mid));
  }
  return median;
}

CouplingMatrix sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                        const SolverConfig& config) {
  config.validate();
  require_matching(mu, nu, cost);

  double epsilon = 0.0;
  if (config.epsilon) {
    epsilon = *config.epsilon;
  } else {
    epsilon = 0.05 * median_cost(cost);
    if (!(epsilon > 0.0)) epsilon = 0.05 * std::max(cost.maxCoeff(), 1.0);
  }

  // Atoms with zero mass carry no plan mass; iterate on the support only.
  std::vector<Index> rows;
  std::vector<Index> cols;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu.weights()(i) > 0.0) rows.push_back(i);
  }
  for (Index j = 0; j < nu.size(); ++j) {
    if (nu.weights()(j) > 0.0) cols.push_back(j);
  }
  const Index n = static_cast<Index>(rows.size());
  const Index m = static_cast<Index>(cols.size());

  Matrix support_cost(n, m);
  Vector log_a(n);
  Vector log_b(m);
  for (Index i = 0; i < n; ++i) log_a(i) = std::log(mu.weights()(rows[i]));
  for (Index j = 0; j < m; ++j) log_b(j) = std::log(nu.weights()(cols[j]));
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) support_cost(i, j) = cost(rows[i], cols[j]);
  }
  const Vector a = log_a.array().exp().matrix();
  const Vector b = log_b.array().exp().matrix();

  // Epsilon scaling: solve a geometric sequence of larger epsilons first and
  // warm-start each stage from the previous potentials. Intermediate stages
  // only need a rough fit; the final stage runs to the tolerance.
  std::vector<double> stages;
  const double span = support_cost.maxCoeff() - support_cost.minCoeff();
  if (!std::isfinite(support_cost.cwiseAbs().maxCoeff() / epsilon)) {
    std::ostringstream os;
    os << "sinkhorn cost/epsilon overflows at epsilon=" << epsilon << "; use a larger epsilon";
    throw NumericError(os.str());
  }
  for (double stage = span; stage > epsilon * kSinkhornScalingFactor; stage *= kSinkhornScalingStep) {
    stages.push_back(stage);
  }
  stages.push_back(epsilon);

  Matrix scaled(n, m);  // -C / stage epsilon
  // Dual potentials divided by the stage epsilon.
  Vector f = Vector::Zero(n);
  Vector g = Vector::Zero(m);
  Vector col_sums(m);
  double error = std::numeric_limits<double>::infinity();
  int iteration = 0;
  // True only once the requested epsilon itself met the tolerance.
  bool converged = false;
  double previous_stage = stages.front();
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const double stage = stages[k];
    const bool last = k + 1 == stages.size();
    const double tolerance = last ? config.marginal_tolerance
                                  : std::max(config.marginal_tolerance, kSinkhornStageTolerance);
    scaled = -support_cost / stage;
    f *= previous_stage / stage;
    g *= previous_stage / stage;
    previous_stage = stage;
    error = std::numeric_limits<double>::infinity();
    int stage_iterations = 0;
    while (iteration < config.max_iterations) {
      ++iteration;
      ++stage_iterations;
      if (stage_iterations > kSinkhornNewtonAfter) {
        sinkhorn_newton_step(scaled, a, b, f, g);
      }
      for (Index j = 0; j < m; ++j) g(j) = log_b(j) - log_sum_exp(scaled.col(j) + f);
      for (Index i = 0; i < n; ++i) {
        f(i) = log_a(i) - log_sum_exp(scaled.row(i).transpose() + g);
      }
      if (!f.allFinite() || !g.allFinite()) {
        std::ostringstream os;
        os << "sinkhorn scaling underflowed at epsilon=" << epsilon << "; use a larger epsilon";
        throw NumericError(os.str());
      }
      // Rows are exact after the f update; the column residual measures
      // convergence.
      for (Index j = 0; j < m; ++j) {
        col_sums(j) = ((scaled.col(j) + f).array() + g(j)).exp().sum();
      }
      error = (col_sums - b).lpNorm<1>();
      if (error <= tolerance) {
        converged = last;
        break;
      }
    }
  }

  Matrix plan = Matrix::Zero(mu.size(), nu.size());
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) plan(rows[i], cols[j]) = std::exp(scaled(i, j) + f(i) + g(j));
  }
  if (!plan.allFinite()) {
    std::ostringstream os;
    os << "sinkhorn produced a non-finite plan at epsilon=" << epsilon << "; use a larger epsilon";
    throw NumericError(os.str());
  }
  CouplingMatrix out = make_coupling(std::move(plan), mu, nu, SolverMode::kSinkhorn);
  out.iterations = iteration;
  out.epsilon = epsilon;
  if (!converged || !(out.marginal_error <= config.marginal_tolerance)) {
    std::ostringstream os;
    os << "sinkhorn did not converge in " << iteration << " iterations (marginal error "
       << out.marginal_error << ", tolerance " << config.marginal_tolerance << ")";
    throw ConvergenceError(os.str(), out.marginal_error, iteration);
  }
  return out;
}

std::vector<Index> solve_assignment(const Matrix& cost) {
  // Shortest augmenting path with dual potentials, O(n^3).
  const Index n = cost.rows();
  if (cost.cols() != n) throw InvalidInputError("assignment needs a square cost matrix");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based internally; column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<Index> match(n + 1, 0);  // match[col] = row
  std::vector<Index> way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> used(n + 1);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const Index row0 = match[col0];
      double delta = kInf;
      Index col1 = 0;
      for (Index col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double slack = cost(row0 - 1, col - 1) - u[row0] - v[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (Index col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const Index col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<Index> perm(n);
  for (Index col = 1; col <= n; ++col) perm[match[col] - 1] = col - 1;
  return perm;
}

CouplingMatrix network_simplex_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const Matrix& cost) {
  require_matching(mu, nu, cost);
  const double gap = std::abs(mu.weights().sum() - nu.weights().sum());
  if (gap > kFeasibilityTolerance) {
    throw InvalidInputError("measures carry different total mass");
  }
  TransportSimplex simplex(mu.weights(), nu.weights(), cost);
  simplex.solve();
  CouplingMatrix out = make_coupling(simplex.plan(), mu, nu, SolverMode::kExact);
  out.iterations = simplex.pivots();
  return out;
}

CouplingMatrix exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost) {
  require_matching(mu, nu, cost);
  const double gap = std::abs(mu.weights().sum() - nu.weights().sum());
  if (gap > kFeasibilityTolerance) {
    throw InvalidInputError("measures carry different total mass");
  }
  if (mu.size() == nu.size() && mu.is_uniform() && nu.is_uniform()) {
    const Index n = mu.size();
    const std::vector<Index> perm = solve_assignment(cost);
    Matrix plan = Matrix::Zero(n, n);
    const double mass = 1.0 / static_cast<double>(n);
    for (Index i = 0; i < n; ++i) plan(i, perm[i]) = mass;
    return make_coupling(std::move(plan), mu, nu, SolverMode::kExact);
  }
  return network_simplex_ot(mu, nu, cost);
}

CouplingMatrix solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                        const SolverConfig& config) {
  config.validate();
  SolverMode mode = config.mode;
  if (mode == SolverMode::kAuto) {
    const double size = static_cast<double>(mu.size()) * static_cast<double>(nu.size());
    mode = size <= kExactSizeLimit ? SolverMode::kExact : SolverMode::kSinkhorn;
  }
  if (mode == SolverMode::kExact) return exact_ot(mu, nu, cost);
  return sinkhorn(mu, nu, cost, config);
}

Matrix barycentric_projection(const CouplingMatrix& coupling, const Matrix& target_points) {
  if (coupling.cols() != target_points.rows()) {
    std::ostringstream os;
    os << "coupling has " << coupling.cols() << " columns but " << target_points.rows()
       << " target points were given";
    throw InvalidInputError(os.str());
  }
  return coupling.plan * target_points;
}

double transport_cost(const CouplingMatrix& coupling, const Matrix& cost) {
  if (coupling.rows() != cost.rows() || coupling.cols() != cost.cols()) {
    throw InvalidInputError("coupling and cost dimensions differ");
  }
  return coupling.plan.cwiseProduct(cost).sum();
}

}  // namespace potd
