#include "xxzbell/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace xxzbell {

BellEvaluator::BellEvaluator(const ReducedDensityMatrix& rho) : rho_(&rho), n_(rho.n) {}

BellEvaluator::BellEvaluator(const MpsState& state, int n) : state_(&state), n_(n) {
  if (!state.canonical) throw NotCanonicalized("BellEvaluator: canonicalize first");
}

std::pair<double, double> BellEvaluator::mk_pair(const MeasurementFrame& frame) const {
  if (frame.n != n_) throw DimensionMismatch("BellEvaluator: frame size mismatch");
  if (rho_) {
    const BellOperatorPair ops = mk_operators(frame);
    return {(rho_->matrix * ops.m).trace().real(),
            (rho_->matrix * ops.m_prime).trace().real()};
  }
  return mk_expectation_mps(*state_, frame);
}

double BellEvaluator::value(Objective objective, const MeasurementFrame& frame) const {
  const auto [m, mp] = mk_pair(frame);
  return objective == Objective::mermin ? m : (m + mp) / std::sqrt(2.0);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int param_count(PlaneKind kind, int n) {
  return kind == PlaneKind::full ? 4 * n : 2 * n;
}

MeasurementFrame frame_from_params(PlaneKind kind, int n, const Eigen::VectorXd& x) {
  MeasurementFrame f;
  f.n = n;
  f.a.resize(n);
  f.a_prime.resize(n);
  auto vec_at = [&](int k) -> UnitVector3& { return k < n ? f.a[k] : f.a_prime[k - n]; };
  for (int k = 0; k < 2 * n; ++k) {
    switch (kind) {
      case PlaneKind::full:
        vec_at(k) = UnitVector3::from_angles(x(2 * k), x(2 * k + 1));
        break;
      case PlaneKind::xy:
        vec_at(k) = UnitVector3::from_angles(std::numbers::pi / 2.0, x(k));
        break;
      case PlaneKind::xz:
        vec_at(k) = UnitVector3::from_angles(x(k), 0.0);
        break;
    }
  }
  return f;
}

Eigen::VectorXd params_from_frame(PlaneKind kind, const MeasurementFrame& f) {
  const int n = f.n;
  Eigen::VectorXd x(param_count(kind, n));
  auto vec_at = [&](int k) -> const UnitVector3& {
    return k < n ? f.a[k] : f.a_prime[k - n];
  };
  for (int k = 0; k < 2 * n; ++k) {
    const UnitVector3& v = vec_at(k);
    switch (kind) {
      case PlaneKind::full:
        x(2 * k) = v.theta();
        x(2 * k + 1) = v.phi();
        break;
      case PlaneKind::xy:
        x(k) = std::atan2(v.y, v.x);
        break;
      case PlaneKind::xz:
        x(k) = std::atan2(v.x, v.z);
        break;
    }
  }
  return x;
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LocalSearchResult {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Nelder-Mead descent on the negated objective; terminates at simplex
// diameter <= 1e-8 (inf-norm around the best vertex) or 5000 iterations.
template <typename F>
LocalSearchResult nelder_mead(F&& objective, Eigen::VectorXd x0, double step) {
  constexpr int kMaxIters = 5000;
  constexpr double kDiameterTol = 1e-8;
  const int d = static_cast<int>(x0.size());

  std::vector<Eigen::VectorXd> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (int i = 1; i <= d; ++i) xs[i](i - 1) += step;
  for (int i = 0; i <= d; ++i) fs[i] = -objective(xs[i]);

  std::vector<int> order(d + 1);
  bool converged = false;
  for (int it = 0; it < kMaxIters; ++it) {
    for (int i = 0; i <= d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });

    double diameter = 0.0;
    for (int i = 0; i <= d; ++i) {
      diameter = std::max(diameter, (xs[order[i]] - xs[order[0]]).lpNorm<Eigen::Infinity>());
    }
    if (diameter <= kDiameterTol) {
      converged = true;
      break;
    }

    const int best = order[0], second_worst = order[d - 1], worst = order[d];
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) centroid += xs[order[i]];
    centroid /= d;

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double f_reflected = -objective(reflected);
    if (f_reflected < fs[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double f_expanded = -objective(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }
    const Eigen::VectorXd contracted =
        (f_reflected < fs[worst]) ? (centroid + 0.5 * (reflected - centroid)).eval()
                                  : (centroid + 0.5 * (xs[worst] - centroid)).eval();
    const double f_contracted = -objective(contracted);
    if (f_contracted < std::min(fs[worst], f_reflected)) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }
    for (int i = 0; i <= d; ++i) {  // shrink
      if (i == best) continue;
      xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
      fs[i] = -objective(xs[i]);
    }
  }

  int best = 0;
  for (int i = 1; i <= d; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return {xs[best], -fs[best], converged};
}

}  // namespace

OptimizationResult optimize(Objective objective, const BellEvaluator& evaluator,
                            PlaneConstraint constraint, int restarts, uint64_t seed,
                            const std::vector<MeasurementFrame>& warm_starts) {
  if (restarts < 1) throw DimensionMismatch("optimize: restarts must be >= 1");
  const int n = evaluator.n();
  const int d = param_count(constraint.kind, n);

  auto objective_fn = [&](const Eigen::VectorXd& x) {
    return evaluator.value(objective, frame_from_params(constraint.kind, n, x));
  };

  const int total = restarts + static_cast<int>(warm_starts.size());
  LocalSearchResult best;
  int best_index = -1;
  bool best_converged = false;
  for (int r = 0; r < total; ++r) {
    Eigen::VectorXd x0(d);
    double step = 0.5;
    if (r < restarts) {
      std::mt19937_64 rng(seed * 6364136223846793005ULL + (uint64_t(r) + 1) * 1442695040888963407ULL);
      for (int i = 0; i < d; ++i) x0(i) = kTwoPi * unit_draw(rng);
    } else {
      x0 = params_from_frame(constraint.kind, warm_starts[r - restarts]);
      step = 0.1;
    }
    LocalSearchResult result = nelder_mead(objective_fn, std::move(x0), step);
    // Capped restarts are discarded unless nothing converged at all.
    const bool improves = best_index < 0 ||
                          (result.converged && !best_converged) ||
                          (result.converged == best_converged && result.value > best.value + 1e-10);
    if (improves) {
      best = std::move(result);
      best_index = r;
      best_converged = best.converged;
    }
  }

  OptimizationResult out;
  out.frame = frame_from_params(constraint.kind, n, best.x);
  out.value = evaluator.value(objective, out.frame);  // certificate re-evaluation
  out.constraint = constraint;
  out.restarts_used = total;
  out.best_restart_index = best_index;
  out.converged = best_converged;
  return out;
}

OptimizationResult optimize(Objective objective, const ReducedDensityMatrix& rho, int n,
                            PlaneConstraint constraint, int restarts, uint64_t seed) {
  if (rho.n != n) throw DimensionMismatch("optimize: rho.n != n");
  BellEvaluator evaluator(rho);
  return optimize(objective, evaluator, constraint, restarts, seed);
}

OptimizationResult optimize(Objective objective, const MpsState& state, int n,
                            PlaneConstraint constraint, int restarts, uint64_t seed) {
  BellEvaluator evaluator(state, n);
  return optimize(objective, evaluator, constraint, restarts, seed);
}

double horodecki_m2(const ReducedDensityMatrix& rho) {
  if (rho.n != 2 || rho.matrix.rows() != 4) {
    throw DimensionMismatch("horodecki_m2: need a two-site RDM");
  }
  const std::array<ComplexMatrix, 3> sigma = {pauli(Axis::x), pauli(Axis::y), pauli(Axis::z)};
  Eigen::Matrix3d t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      t(a, b) = (rho.matrix * kron(sigma[a], sigma[b])).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t);
  const Eigen::Vector3d u = solver.eigenvalues();  // ascending
  return std::sqrt(u(2) + u(1));
}

PlanePair optimize_both_planes(Objective objective, const BellEvaluator& evaluator,
                               int restarts, uint64_t seed,
                               const std::vector<MeasurementFrame>& warm_starts) {
  PlanePair out;
  out.xy = optimize(objective, evaluator, {PlaneKind::xy}, restarts, seed, warm_starts);
  out.xz = optimize(objective, evaluator, {PlaneKind::xz}, restarts, seed, warm_starts);
  // Tie-break to xy for stable plane-crossing detection.
  out.best = (out.xz.value > out.xy.value + 1e-10) ? out.xz : out.xy;
  if (evaluator.n() <= 4) {
    out.full = optimize(objective, evaluator, {PlaneKind::full}, restarts, seed, warm_starts);
  }
  return out;
}

}  // namespace xxzbell
