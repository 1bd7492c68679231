#pragma once

#include <cstdint>
#include <vector>

#include "xxzbell/mps.hpp"

namespace xxzbell {

struct XxzCoupling {
  double delta = 1.0;
};

struct EvolutionStage {
  double tau;
  int max_steps;
  double energy_tolerance;
};

using EvolutionSchedule = std::vector<EvolutionStage>;

/// tau in {0.1, 0.05, 0.01, 1e-3, 1e-4}, 20000 steps per stage, per-site
/// energy-change tolerance 1e-10.
EvolutionSchedule default_schedule();

struct ConvergenceReport {
  double final_energy_per_site = 0.0;
  std::vector<int> steps_taken;
  double truncation_error_max = 0.0;
  bool converged = false;
  uint64_t seed = 0;
};

enum class Bond { even, odd };

/// h = sigma_x sigma_x + sigma_y sigma_y + delta sigma_z sigma_z on two sites.
ComplexMatrix two_site_hamiltonian(XxzCoupling c);

/// exp(-tau * h); positive definite.
ComplexMatrix trotter_gate(XxzCoupling c, double tau);

/// Contracts a 4x4 gate into the two-site tensor across the given bond,
/// re-splits by SVD keeping at most d_max singular values (relative cutoff
/// 1e-12), renormalizes the bond weights. Returns the truncation error
/// (sum of squared discarded normalized singular values).
double apply_gate(MpsState& state, const ComplexMatrix& gate, Bond bond, int d_max);

/// Imaginary-time evolution through the schedule starting from
/// random_mps(D, seed); second-order Trotter ordering within each step.
std::pair<MpsState, ConvergenceReport> ground_state(XxzCoupling c, int D,
                                                    const EvolutionSchedule& schedule,
                                                    uint64_t seed);

/// Same, but warm-started from an existing state.
std::pair<MpsState, ConvergenceReport> ground_state_from(MpsState start, XxzCoupling c,
                                                         int D,
                                                         const EvolutionSchedule& schedule);

/// Average of the even-bond and odd-bond two-site energies.
double energy_per_site(const MpsState& state, XxzCoupling c);

}  // namespace xxzbell
