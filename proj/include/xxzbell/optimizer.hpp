#pragma once

#include <optional>

#include "xxzbell/bell.hpp"

namespace xxzbell {

enum class Objective { mermin, svetlichny };

enum class PlaneKind { full, xy, xz };

struct PlaneConstraint {
  PlaneKind kind = PlaneKind::full;
};

struct OptimizationResult {
  double value = 0.0;
  MeasurementFrame frame;
  PlaneConstraint constraint;
  int restarts_used = 0;
  int best_restart_index = -1;
  bool converged = false;
};

/// Objective evaluation backend: dense Tr(rho M) against a cached RDM, or
/// the contracted MPS path (default for n >= 8).
class BellEvaluator {
 public:
  explicit BellEvaluator(const ReducedDensityMatrix& rho);
  BellEvaluator(const MpsState& state, int n);

  int n() const { return n_; }
  std::pair<double, double> mk_pair(const MeasurementFrame& frame) const;
  double value(Objective objective, const MeasurementFrame& frame) const;

 private:
  const ReducedDensityMatrix* rho_ = nullptr;
  const MpsState* state_ = nullptr;
  int n_ = 0;
};

/// Deterministic multi-start Nelder-Mead ascent over measurement frames.
/// Each restart starts from seeded-uniform angles; local searches stop at
/// simplex diameter <= 1e-8 or 5000 iterations. `warm_starts` adds extra
/// deterministic starting frames after the random restarts.
OptimizationResult optimize(Objective objective, const BellEvaluator& evaluator,
                            PlaneConstraint constraint, int restarts, uint64_t seed,
                            const std::vector<MeasurementFrame>& warm_starts = {});

OptimizationResult optimize(Objective objective, const ReducedDensityMatrix& rho, int n,
                            PlaneConstraint constraint, int restarts, uint64_t seed);
OptimizationResult optimize(Objective objective, const MpsState& state, int n,
                            PlaneConstraint constraint, int restarts, uint64_t seed);

/// CHSH maximum from the two-qubit correlation matrix, divided by 2 so the
/// classical bound is 1: sqrt(u1 + u2) for the two largest eigenvalues of
/// T^T T.
double horodecki_m2(const ReducedDensityMatrix& rho);

struct PlanePair {
  OptimizationResult best;
  OptimizationResult xy;
  OptimizationResult xz;
  std::optional<OptimizationResult> full;  // present iff n <= 4
};

/// Runs the xy and xz constraints (plus full for n <= 4); best is the
/// argmax over the two planes with ties (<= 1e-10) resolved to xy.
PlanePair optimize_both_planes(Objective objective, const BellEvaluator& evaluator,
                               int restarts, uint64_t seed,
                               const std::vector<MeasurementFrame>& warm_starts = {});

}  // namespace xxzbell
