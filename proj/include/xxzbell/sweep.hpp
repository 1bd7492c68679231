#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xxzbell/itebd.hpp"
#include "xxzbell/optimizer.hpp"

namespace xxzbell {

inline constexpr const char* kVersion = "1.0.0";

struct SweepConfig {
  std::vector<double> delta_grid;         // strictly increasing; default_delta_grid()
  std::vector<int> n_list = {2, 4, 6};    // even n <= 12 (odd accepted but nonstandard)
  std::vector<Objective> objectives = {Objective::mermin};
  int bond_dim = 16;
  int restarts = 0;  // 0 = auto: 64 for n <= 6, 128 for n >= 8
  uint64_t seed = 1;
  bool warm_start = true;
  std::string output_path;

  void validate() const;
  int restarts_for(int n) const { return restarts > 0 ? restarts : (n <= 6 ? 64 : 128); }
};

/// 0 to 3 in steps of 0.05, refined to 0.01 on [0.8, 1.2].
std::vector<double> default_delta_grid();

struct SweepRecord {
  double delta = 0.0;
  int n = 0;
  Objective objective = Objective::mermin;
  double value_xy = 0.0;
  double value_xz = 0.0;
  std::optional<double> value_full;  // present iff n <= 4
  double value_best = 0.0;
  PlaneKind winning_plane = PlaneKind::xy;
  int violation_order_m = 0;   // largest m (parity matching the objective)
                               // with value_best > 2^{(m-1)/2}; 0 if none
  int depth_lower_bound = 1;   // m + 1, or 1 when no violation
  bool converged = false;
  MeasurementFrame frame;      // frame achieving value_best
};

/// Largest m of the objective's parity (odd for mermin, even for
/// svetlichny), 1 <= m <= n-1, with value > 2^{(m-1)/2}; 0 if none.
int violation_order(Objective objective, int n, double value);

struct HierarchyLabels {
  std::string nonlocality;  // "(n, n-m)-type nonlocality" or "no violation"
  int depth_lower_bound = 1;
};

HierarchyLabels classify_hierarchy(const SweepRecord& record);

struct LocalMinimum {
  double delta = 0.0;  // grid point of the minimum
  double bracket_low = 0.0, bracket_high = 0.0;
  int n = 0;
  Objective objective = Objective::mermin;
};

struct PlaneCrossing {
  double delta_low = 0.0, delta_high = 0.0;  // bracketing grid points
  int n = 0;
  Objective objective = Objective::mermin;
};

struct ViolationOnset {
  double delta_low = 0.0, delta_high = 0.0;
  int n = 0;
  Objective objective = Objective::mermin;
  int m = 0;
};

struct FeatureReport {
  std::vector<LocalMinimum> local_minima;
  std::vector<PlaneCrossing> plane_crossings;
  std::vector<ViolationOnset> violation_onsets;
};

/// Runs the full sweep in grid order; warm-starts the ground state and the
/// measurement frames from the previous grid point when enabled. Per-point
/// failures are recorded (converged = false) without aborting.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Discrete three-point minima, winning-plane flips, and threshold flips,
/// each with the bracketing grid points. Throws InsufficientGrid when any
/// (n, objective) group has fewer than 3 records.
FeatureReport detect_features(const std::vector<SweepRecord>& records);

/// CSV with a '#' provenance header (resolved config + version); floats at
/// 12 significant digits; byte-identical for identical configs.
void write_csv(const std::vector<SweepRecord>& records, const std::string& path,
               const SweepConfig* config = nullptr);
std::vector<SweepRecord> read_csv(const std::string& path);

std::string objective_name(Objective objective);
Objective parse_objective(const std::string& name);
std::string plane_name(PlaneKind kind);
PlaneKind parse_plane(const std::string& name);

}  // namespace xxzbell
